#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sphere {

/// Which set of sizing formulas produced a result.
///
/// `PaperLiteral` evaluates the drive-train expressions exactly as printed
/// (several of them equate a force to mass x coefficient). `Corrected` is the
/// dimensionally consistent variant and the default everywhere.
enum class FormulaMode { PaperLiteral, Corrected };

std::string_view to_string(FormulaMode mode);
FormulaMode parse_formula_mode(std::string_view text);

/// Thrown when an input violates a type invariant or an operation precondition.
class InvariantError : public std::invalid_argument {
 public:
  InvariantError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Thrown for unreadable or malformed config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GravityEnvironment {
  std::string name;
  double g = 9.81;  // m/s^2

  bool operator==(const GravityEnvironment&) const = default;
};

struct RobotParams {
  double mass_kg = 0.0;
  double wheel_radius_m = 0.0;  // grouser-tip radius used for torque
  double wheel_diameter_m = 0.0;
  int num_wheels = 0;
  double v_max_mps = 0.0;
  double accel_time_s = 0.0;
  double resistance_factor = 0.0;  // eta, fraction
  double normal_force_per_wheel_N = 0.0;
  double standby_power_W = 0.0;
  double motion_power_W = 0.0;
  double hop_power_W = 0.0;
  double hop_cycle_s = 0.0;
  double cam_linear_throw_m = 0.0;
  double cam_angular_throw_rad = 0.0;
  double design_hop_height_m = 0.0;

  bool operator==(const RobotParams&) const = default;
};

struct TerrainSpec {
  std::string name;
  double mu = 0.0;
  double mu_rr = 0.0;
  double slope_rad = 0.0;
  double sinkage_m = 0.0;
  double slip_mean = 0.0;
  double slip_sd = 0.05;

  bool operator==(const TerrainSpec&) const = default;
};

/// Motor catalog entry. Speeds are stored in rad/s; files may carry rpm.
struct MotorSpec {
  std::string name;
  double rated_torque_Nm = 0.0;
  double no_load_speed_radps = 0.0;

  bool operator==(const MotorSpec&) const = default;
};

struct DrivetrainConfig {
  std::vector<double> primary_reductions{1, 5, 10, 30, 50, 100, 298, 1000};
  std::vector<double> secondary_reductions{1, 10};
  /// Geared no-load rim speed may not exceed this multiple of V_max.
  double max_speed_factor = 2.0;
  std::vector<MotorSpec> motors;

  bool operator==(const DrivetrainConfig&) const = default;
};

struct GrouserConfig {
  double height_m = 0.010;
  double sinkage_m = 0.010;
  double slip = 0.2;

  bool operator==(const GrouserConfig&) const = default;
};

struct SpringSpec {
  double youngs_modulus_Pa = 0.0;
  double length_m = 0.0;
  double max_deflection_m = 0.0;
  double width_m = 0.0;
  double thickness_m = 0.0;
  /// Number of equal-length springs n'. Empty means every spring in the pack
  /// has the same length (n' = n).
  std::optional<int> equal_length_count;

  bool operator==(const SpringSpec&) const = default;
};

struct HopperConfig {
  double efficiency = 0.23;
  /// Stiffness quoted for the built mechanism, compared against the sized value.
  std::optional<double> reference_spring_constant = 71.0;
  SpringSpec spring{200e9, 0.05, 0.01, 0.01, 0.001, std::nullopt};

  bool operator==(const HopperConfig&) const = default;
};

/// Everything read from one config file.
struct Config {
  RobotParams robot;
  std::vector<TerrainSpec> terrains;
  std::vector<GravityEnvironment> gravity;  // user-defined entries only
  DrivetrainConfig drivetrain;
  GrouserConfig grouser;
  HopperConfig hopper;
  /// Budget fixture paths, resolved relative to the config file.
  std::optional<std::filesystem::path> mass_budget_path;
  std::optional<std::filesystem::path> power_budget_path;

  bool operator==(const Config&) const = default;
};

void validate(const GravityEnvironment& env);
void validate(const RobotParams& robot);
void validate(const TerrainSpec& terrain);
void validate(const SpringSpec& spring);
void validate(const Config& config);

/// Built-in environments: earth, mars, moon and paper-lunar (g = 1.6).
const std::vector<GravityEnvironment>& builtin_gravity();

/// Looks up `name` among `user_defined` first, then the built-ins.
GravityEnvironment gravity_env(std::string_view name,
                               const std::vector<GravityEnvironment>& user_defined = {});

const TerrainSpec& find_terrain(const Config& config, std::string_view name);

Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view json_text,
                    const std::filesystem::path& base_dir = {});
/// Serializes a config in the same schema `parse_config` reads (angles in radians).
std::string emit_config(const Config& config);

/// Reference rover: 2 kg, sand, 14 degree grade.
RobotParams reference_robot();
TerrainSpec reference_sand();

double deg_to_rad(double deg);
double rad_to_deg(double rad);

}  // namespace sphere
