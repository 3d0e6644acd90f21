#include "sphere/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sphere {

using nlohmann::json;

namespace {

std::string format_bound(std::string_view field, std::string_view bound, double got) {
  std::ostringstream os;
  os << field << " must be " << bound << " (got " << got << ")";
  return os.str();
}

void require(bool ok, const std::string& field, std::string_view bound, double got) {
  if (!ok) {
    throw InvariantError(field, format_bound(field, bound, got));
  }
}

// Walks a JSON object while remembering the dotted path, so errors can name
// the offending field.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError("config field '" + path_ + "' must be an object");
    }
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return node_.contains(key) && !node_.at(std::string(key)).is_null(); }
  bool explicitly_null(std::string_view key) const {
    return node_.contains(key) && node_.at(std::string(key)).is_null();
  }

  const json& raw(std::string_view key) const { return node_.at(std::string(key)); }

  double number(std::string_view key) const {
    if (!has(key)) {
      throw ConfigError("missing required field '" + field(key) + "'");
    }
    const auto& v = raw(key);
    if (!v.is_number()) {
      throw ConfigError("field '" + field(key) + "' must be a number");
    }
    return v.get<double>();
  }

  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(std::string_view key) const {
    if (!has(key)) {
      throw ConfigError("missing required field '" + field(key) + "'");
    }
    const auto& v = raw(key);
    if (!v.is_number_integer()) {
      throw ConfigError("field '" + field(key) + "' must be an integer");
    }
    return v.get<int>();
  }

  std::string text(std::string_view key) const {
    if (!has(key)) {
      throw ConfigError("missing required field '" + field(key) + "'");
    }
    const auto& v = raw(key);
    if (!v.is_string()) {
      throw ConfigError("field '" + field(key) + "' must be a string");
    }
    return v.get<std::string>();
  }

  /// Angle given either as `<stem>_rad` or `<stem>_deg`.
  std::optional<double> angle(std::string_view stem) const {
    const std::string rad = std::string(stem) + "_rad";
    const std::string deg = std::string(stem) + "_deg";
    if (has(rad) && has(deg)) {
      throw ConfigError("field '" + field(stem) + "' given in both _rad and _deg form");
    }
    if (has(rad)) return number(rad);
    if (has(deg)) return deg_to_rad(number(deg));
    return std::nullopt;
  }

  std::vector<double> numbers(std::string_view key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_array()) {
      throw ConfigError("field '" + field(key) + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) {
        throw ConfigError("field '" + field(key) + "' must be an array of numbers");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  const json& node_;
  std::string path_;
};

RobotParams read_robot(const Reader& r) {
  RobotParams p;
  p.mass_kg = r.number("mass_kg");
  p.wheel_radius_m = r.number("wheel_radius_m");
  p.wheel_diameter_m = r.number_or("wheel_diameter_m", 2.0 * p.wheel_radius_m);
  p.num_wheels = r.integer("num_wheels");
  p.v_max_mps = r.number("v_max_mps");
  p.accel_time_s = r.number("accel_time_s");
  p.resistance_factor = r.number("resistance_factor");
  p.normal_force_per_wheel_N = r.number("normal_force_per_wheel_N");
  p.standby_power_W = r.number_or("standby_power_W", 15.0);
  p.motion_power_W = r.number_or("motion_power_W", 20.0);
  p.hop_power_W = r.number_or("hop_power_W", 16.0);
  p.hop_cycle_s = r.number_or("hop_cycle_s", 3.0);
  p.cam_linear_throw_m = r.number_or("cam_linear_throw_m", 0.025);
  p.cam_angular_throw_rad = r.angle("cam_angular_throw").value_or(deg_to_rad(25.15));
  p.design_hop_height_m = r.number_or("design_hop_height_m", 0.20);
  return p;
}

TerrainSpec read_terrain(const Reader& r) {
  TerrainSpec t;
  t.name = r.text("name");
  t.mu = r.number("mu");
  t.mu_rr = r.number("mu_rr");
  t.slope_rad = r.angle("slope").value_or(0.0);
  t.sinkage_m = r.number_or("sinkage_m", 0.0);
  t.slip_mean = r.number_or("slip_mean", 0.0);
  t.slip_sd = r.number_or("slip_sd", 0.05);
  return t;
}

SpringSpec read_spring(const Reader& r, const SpringSpec& defaults) {
  SpringSpec s;
  s.youngs_modulus_Pa = r.number_or("E_Pa", defaults.youngs_modulus_Pa);
  s.length_m = r.number_or("L_m", defaults.length_m);
  s.max_deflection_m = r.number_or("s_m", defaults.max_deflection_m);
  s.width_m = r.number_or("b_m", defaults.width_m);
  s.thickness_m = r.number_or("t_m", defaults.thickness_m);
  if (r.has("n_prime")) {
    s.equal_length_count = r.integer("n_prime");
  }
  return s;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::string_view to_string(FormulaMode mode) {
  return mode == FormulaMode::PaperLiteral ? "paper-literal" : "corrected";
}

FormulaMode parse_formula_mode(std::string_view text) {
  if (text == "paper-literal" || text == "literal") return FormulaMode::PaperLiteral;
  if (text == "corrected" || text == "dimensionally-corrected") return FormulaMode::Corrected;
  throw InvariantError("mode", "unknown formula mode '" + std::string(text) +
                                   "' (expected paper-literal or corrected)");
}

InvariantError::InvariantError(std::string field, const std::string& what)
    : std::invalid_argument(what), field_(std::move(field)) {}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

void validate(const GravityEnvironment& env) {
  require(!env.name.empty(), "gravity.name", "non-empty", 0.0);
  require(env.g > 0.0 && std::isfinite(env.g), "gravity." + env.name + ".g", "> 0", env.g);
}

void validate(const RobotParams& p) {
  const auto positive = [](double v, const char* f) { require(v > 0.0 && std::isfinite(v), f, "> 0", v); };
  positive(p.mass_kg, "mass_kg");
  positive(p.wheel_radius_m, "wheel_radius_m");
  positive(p.wheel_diameter_m, "wheel_diameter_m");
  require(p.num_wheels >= 1, "num_wheels", ">= 1", p.num_wheels);
  positive(p.v_max_mps, "v_max_mps");
  positive(p.accel_time_s, "accel_time_s");
  require(p.resistance_factor >= 0.0 && p.resistance_factor <= 1.0, "resistance_factor", "in [0, 1]",
          p.resistance_factor);
  positive(p.normal_force_per_wheel_N, "normal_force_per_wheel_N");
  positive(p.standby_power_W, "standby_power_W");
  positive(p.motion_power_W, "motion_power_W");
  positive(p.hop_power_W, "hop_power_W");
  positive(p.hop_cycle_s, "hop_cycle_s");
  positive(p.cam_linear_throw_m, "cam_linear_throw_m");
  positive(p.cam_angular_throw_rad, "cam_angular_throw_rad");
  positive(p.design_hop_height_m, "design_hop_height_m");
  const double ratio = p.wheel_diameter_m / (2.0 * p.wheel_radius_m);
  require(std::abs(ratio - 1.0) <= 0.02, "wheel_diameter_m", "within 2% of 2 * wheel_radius_m",
          p.wheel_diameter_m);
}

void validate(const TerrainSpec& t) {
  const std::string prefix = "terrains." + t.name + ".";
  require(!t.name.empty(), "terrains.name", "non-empty", 0.0);
  require(t.mu > 0.0 && t.mu <= 2.0, prefix + "mu", "in (0, 2]", t.mu);
  require(t.mu_rr >= 0.0 && t.mu_rr <= t.mu, prefix + "mu_rr", "in [0, mu]", t.mu_rr);
  require(t.slope_rad >= 0.0 && t.slope_rad < std::numbers::pi / 2, prefix + "slope_rad", "in [0, pi/2)",
          t.slope_rad);
  require(t.sinkage_m >= 0.0, prefix + "sinkage_m", ">= 0", t.sinkage_m);
  require(t.slip_mean >= 0.0 && t.slip_mean < 1.0, prefix + "slip_mean", "in [0, 1)", t.slip_mean);
  require(t.slip_sd >= 0.0, prefix + "slip_sd", ">= 0", t.slip_sd);
}

void validate(const SpringSpec& s) {
  const auto positive = [](double v, const char* f) { require(v > 0.0 && std::isfinite(v), f, "> 0", v); };
  positive(s.youngs_modulus_Pa, "spring.E_Pa");
  positive(s.length_m, "spring.L_m");
  positive(s.max_deflection_m, "spring.s_m");
  positive(s.width_m, "spring.b_m");
  positive(s.thickness_m, "spring.t_m");
  require(s.max_deflection_m <= s.length_m, "spring.s_m", "<= spring.L_m", s.max_deflection_m);
  if (s.equal_length_count) {
    require(*s.equal_length_count >= 1, "spring.n_prime", ">= 1", *s.equal_length_count);
  }
}

void validate(const Config& c) {
  validate(c.robot);
  for (const auto& t : c.terrains) validate(t);
  for (const auto& g : c.gravity) validate(g);
  const auto& d = c.drivetrain;
  require(!d.primary_reductions.empty(), "drivetrain.reductions.primary", "non-empty", 0.0);
  require(!d.secondary_reductions.empty(), "drivetrain.reductions.secondary", "non-empty", 0.0);
  for (double r : d.primary_reductions) require(r >= 1.0, "drivetrain.reductions.primary", ">= 1", r);
  for (double r : d.secondary_reductions) require(r >= 1.0, "drivetrain.reductions.secondary", ">= 1", r);
  require(d.max_speed_factor >= 1.0, "drivetrain.max_speed_factor", ">= 1", d.max_speed_factor);
  for (const auto& m : d.motors) {
    require(m.rated_torque_Nm > 0.0, "drivetrain.motors." + m.name + ".rated_torque_Nm", "> 0",
            m.rated_torque_Nm);
    require(m.no_load_speed_radps > 0.0, "drivetrain.motors." + m.name + ".no_load_speed", "> 0",
            m.no_load_speed_radps);
  }
  require(c.grouser.height_m >= 0.0, "grouser.height_m", ">= 0", c.grouser.height_m);
  require(c.grouser.sinkage_m >= 0.0, "grouser.sinkage_m", ">= 0", c.grouser.sinkage_m);
  require(c.grouser.slip >= 0.0 && c.grouser.slip < 1.0, "grouser.slip", "in [0, 1)", c.grouser.slip);
  require(c.hopper.efficiency > 0.0 && c.hopper.efficiency <= 1.0, "hopper.efficiency", "in (0, 1]",
          c.hopper.efficiency);
  validate(c.hopper.spring);
}

const std::vector<GravityEnvironment>& builtin_gravity() {
  static const std::vector<GravityEnvironment> envs{
      {"earth", 9.81}, {"mars", 3.71}, {"moon", 1.62}, {"paper-lunar", 1.6}};
  return envs;
}

GravityEnvironment gravity_env(std::string_view name, const std::vector<GravityEnvironment>& user_defined) {
  for (const auto& e : user_defined) {
    if (e.name == name) return e;
  }
  for (const auto& e : builtin_gravity()) {
    if (e.name == name) return e;
  }
  throw InvariantError("gravity", "unknown gravity environment '" + std::string(name) + "'");
}

const TerrainSpec& find_terrain(const Config& config, std::string_view name) {
  for (const auto& t : config.terrains) {
    if (t.name == name) return t;
  }
  throw InvariantError("terrain", "unknown terrain '" + std::string(name) + "'");
}

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "config parse error at line " << line_of(json_text, e.byte) << ": " << e.what();
    throw ConfigError(os.str());
  }
  const Reader top(doc, "");

  Config c;
  if (!top.has("robot")) throw ConfigError("missing required field 'robot'");
  c.robot = read_robot(Reader(top.raw("robot"), "robot"));

  if (top.has("terrains")) {
    const auto& arr = top.raw("terrains");
    if (!arr.is_array()) throw ConfigError("field 'terrains' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.terrains.push_back(read_terrain(Reader(arr[i], "terrains[" + std::to_string(i) + "]")));
    }
  }

  if (top.has("gravity")) {
    const auto& arr = top.raw("gravity");
    if (!arr.is_array()) throw ConfigError("field 'gravity' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader r(arr[i], "gravity[" + std::to_string(i) + "]");
      c.gravity.push_back({r.text("name"), r.number("g")});
    }
  }

  if (top.has("drivetrain")) {
    const Reader r(top.raw("drivetrain"), "drivetrain");
    if (r.has("reductions")) {
      const Reader red(r.raw("reductions"), "drivetrain.reductions");
      c.drivetrain.primary_reductions = red.numbers("primary", c.drivetrain.primary_reductions);
      c.drivetrain.secondary_reductions = red.numbers("secondary", c.drivetrain.secondary_reductions);
    }
    c.drivetrain.max_speed_factor = r.number_or("max_speed_factor", c.drivetrain.max_speed_factor);
    if (r.has("motors")) {
      const auto& arr = r.raw("motors");
      if (!arr.is_array()) throw ConfigError("field 'drivetrain.motors' must be an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const Reader m(arr[i], "drivetrain.motors[" + std::to_string(i) + "]");
        if (m.has("no_load_speed_rpm") && m.has("no_load_speed_radps")) {
          throw ConfigError("field '" + m.field("no_load_speed") + "' given in both rpm and radps form");
        }
        const double speed = m.has("no_load_speed_radps")
                                 ? m.number("no_load_speed_radps")
                                 : m.number("no_load_speed_rpm") * 2.0 * std::numbers::pi / 60.0;
        c.drivetrain.motors.push_back({m.text("name"), m.number("rated_torque_Nm"), speed});
      }
    }
  }

  if (top.has("grouser")) {
    const Reader r(top.raw("grouser"), "grouser");
    c.grouser.height_m = r.number_or("height_m", c.grouser.height_m);
    c.grouser.sinkage_m = r.number_or("sinkage_m", c.grouser.sinkage_m);
    c.grouser.slip = r.number_or("slip", c.grouser.slip);
  }

  if (top.has("hopper")) {
    const Reader r(top.raw("hopper"), "hopper");
    if (auto cam = r.angle("cam_angle")) c.robot.cam_angular_throw_rad = *cam;
    if (r.has("design_hop_height_m")) c.robot.design_hop_height_m = r.number("design_hop_height_m");
    c.hopper.efficiency = r.number_or("efficiency", c.hopper.efficiency);
    if (r.has("reference_spring_constant")) {
      c.hopper.reference_spring_constant = r.number("reference_spring_constant");
    } else if (r.explicitly_null("reference_spring_constant")) {
      c.hopper.reference_spring_constant.reset();
    }
    if (r.has("spring")) {
      c.hopper.spring = read_spring(Reader(r.raw("spring"), "hopper.spring"), c.hopper.spring);
    }
  }

  if (top.has("budgets")) {
    const Reader r(top.raw("budgets"), "budgets");
    if (r.has("mass")) c.mass_budget_path = resolve(base_dir, r.text("mass"));
    if (r.has("power")) c.power_budget_path = resolve(base_dir, r.text("power"));
  }

  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string emit_config(const Config& c) {
  const auto& p = c.robot;
  json robot{{"mass_kg", p.mass_kg},
             {"wheel_radius_m", p.wheel_radius_m},
             {"wheel_diameter_m", p.wheel_diameter_m},
             {"num_wheels", p.num_wheels},
             {"v_max_mps", p.v_max_mps},
             {"accel_time_s", p.accel_time_s},
             {"resistance_factor", p.resistance_factor},
             {"normal_force_per_wheel_N", p.normal_force_per_wheel_N},
             {"standby_power_W", p.standby_power_W},
             {"motion_power_W", p.motion_power_W},
             {"hop_power_W", p.hop_power_W},
             {"hop_cycle_s", p.hop_cycle_s},
             {"cam_linear_throw_m", p.cam_linear_throw_m},
             {"cam_angular_throw_rad", p.cam_angular_throw_rad},
             {"design_hop_height_m", p.design_hop_height_m}};

  json terrains = json::array();
  for (const auto& t : c.terrains) {
    terrains.push_back({{"name", t.name},
                        {"mu", t.mu},
                        {"mu_rr", t.mu_rr},
                        {"slope_rad", t.slope_rad},
                        {"sinkage_m", t.sinkage_m},
                        {"slip_mean", t.slip_mean},
                        {"slip_sd", t.slip_sd}});
  }

  json gravity = json::array();
  for (const auto& g : c.gravity) gravity.push_back({{"name", g.name}, {"g", g.g}});

  json motors = json::array();
  for (const auto& m : c.drivetrain.motors) {
    motors.push_back({{"name", m.name},
                      {"rated_torque_Nm", m.rated_torque_Nm},
                      {"no_load_speed_radps", m.no_load_speed_radps}});
  }

  const auto& s = c.hopper.spring;
  json spring{{"E_Pa", s.youngs_modulus_Pa},
              {"L_m", s.length_m},
              {"s_m", s.max_deflection_m},
              {"b_m", s.width_m},
              {"t_m", s.thickness_m}};
  if (s.equal_length_count) spring["n_prime"] = *s.equal_length_count;

  json hopper{{"efficiency", c.hopper.efficiency}, {"spring", spring}};
  hopper["reference_spring_constant"] =
      c.hopper.reference_spring_constant ? json(*c.hopper.reference_spring_constant) : json(nullptr);

  json doc{{"robot", robot},
           {"terrains", terrains},
           {"gravity", gravity},
           {"drivetrain",
            {{"reductions",
              {{"primary", c.drivetrain.primary_reductions}, {"secondary", c.drivetrain.secondary_reductions}}},
             {"max_speed_factor", c.drivetrain.max_speed_factor},
             {"motors", motors}}},
           {"grouser",
            {{"height_m", c.grouser.height_m}, {"sinkage_m", c.grouser.sinkage_m}, {"slip", c.grouser.slip}}},
           {"hopper", hopper}};
  if (c.mass_budget_path || c.power_budget_path) {
    json budgets = json::object();
    if (c.mass_budget_path) budgets["mass"] = c.mass_budget_path->string();
    if (c.power_budget_path) budgets["power"] = c.power_budget_path->string();
    doc["budgets"] = budgets;
  }
  return doc.dump(2) + "\n";
}

RobotParams reference_robot() {
  RobotParams p;
  p.mass_kg = 2.0;
  p.wheel_radius_m = 0.099;
  p.wheel_diameter_m = 0.20;
  p.num_wheels = 2;
  p.v_max_mps = 0.03;
  p.accel_time_s = 1.0;
  p.resistance_factor = 0.20;
  p.normal_force_per_wheel_N = 1.6;
  p.standby_power_W = 15.0;
  p.motion_power_W = 20.0;
  p.hop_power_W = 16.0;
  p.hop_cycle_s = 3.0;
  p.cam_linear_throw_m = 0.025;
  p.cam_angular_throw_rad = deg_to_rad(25.15);
  p.design_hop_height_m = 0.20;
  return p;
}

TerrainSpec reference_sand() {
  return {"sand", 0.6, 0.15, deg_to_rad(14.0), 0.010, 0.23, 0.05};
}

}  // namespace sphere
