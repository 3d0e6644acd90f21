#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphere/core_model.hpp"

namespace sphere {

/// Tractive force decomposition. `slope_force_N` is the grade-climbing
/// component (not the hop spring force).
struct ForceBreakdown {
  double friction_N = 0.0;
  double slope_force_N = 0.0;
  double accel_force_N = 0.0;
  double total_N = 0.0;
  FormulaMode mode = FormulaMode::Corrected;
};

struct TorqueRequirement {
  double total_Nm = 0.0;
  double per_wheel_Nm = 0.0;
};

enum class BindingConstraint { None, Torque, Speed, Traction };
std::string_view to_string(BindingConstraint c);

struct DrivetrainSolution {
  double required_torque_total_Nm = 0.0;
  double required_torque_per_wheel_Nm = 0.0;
  double tractive_force_N = 0.0;
  double traction_limit_N = 0.0;
  bool feasible = false;
  BindingConstraint binding = BindingConstraint::None;
  /// Selected motor; empty when no motor/reduction pair met torque and speed.
  std::optional<std::string> motor;
  double gear_ratio_primary = 0.0;
  double gear_ratio_secondary = 0.0;
  /// Geared no-load rim speed of the selection.
  double output_speed_mps = 0.0;
  FormulaMode mode = FormulaMode::Corrected;

  double total_reduction() const { return gear_ratio_primary * gear_ratio_secondary; }
};

ForceBreakdown tractive_forces(const RobotParams& robot, const TerrainSpec& terrain,
                               const GravityEnvironment& env, FormulaMode mode);

/// Motor torque needed at the wheels. Throws InvariantError if `forces` was
/// computed in a different mode.
TorqueRequirement required_torque(const ForceBreakdown& forces, const RobotParams& robot, FormulaMode mode);

double traction_limit(const RobotParams& robot, const TerrainSpec& terrain, FormulaMode mode);

/// Picks the motor and two-stage reduction with the smallest total ratio that
/// delivers the per-wheel torque and keeps the geared rim speed within
/// [V_max, max_speed_factor * V_max]. Ties go to catalog order, then the
/// smaller secondary stage. Infeasibility is reported in the result.
DrivetrainSolution size_gear_train(const RobotParams& robot, const TerrainSpec& terrain,
                                   const GravityEnvironment& env, std::span<const MotorSpec> catalog,
                                   const DrivetrainConfig& reductions, FormulaMode mode);

/// One point of a tractive-force parameter sweep.
struct SweepPoint {
  double mass_kg;
  double mu_rr;
  double slope_rad;
  double v_max_mps;
};

/// Evaluates total tractive force at every point; the serial version is the
/// reference for the OpenMP one and both must agree bit-for-bit.
std::vector<double> sweep_tractive_forces_serial(const RobotParams& base, const TerrainSpec& terrain,
                                                 const GravityEnvironment& env, FormulaMode mode,
                                                 std::span<const SweepPoint> points);
std::vector<double> sweep_tractive_forces_parallel(const RobotParams& base, const TerrainSpec& terrain,
                                                   const GravityEnvironment& env, FormulaMode mode,
                                                   std::span<const SweepPoint> points);

}  // namespace sphere
