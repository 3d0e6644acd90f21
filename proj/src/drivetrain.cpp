#include "sphere/drivetrain.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace sphere {

std::string_view to_string(BindingConstraint c) {
  switch (c) {
    case BindingConstraint::None:
      return "none";
    case BindingConstraint::Torque:
      return "torque";
    case BindingConstraint::Speed:
      return "speed";
    case BindingConstraint::Traction:
      return "traction";
  }
  return "none";
}

ForceBreakdown tractive_forces(const RobotParams& robot, const TerrainSpec& terrain,
                               const GravityEnvironment& env, FormulaMode mode) {
  if (robot.accel_time_s <= 0.0) {
    throw InvariantError("accel_time_s", "accel_time_s must be > 0");
  }
  ForceBreakdown f;
  f.mode = mode;
  const double m = robot.mass_kg;
  if (mode == FormulaMode::Corrected) {
    f.friction_N = terrain.mu_rr * m * env.g * std::cos(terrain.slope_rad);
    f.slope_force_N = m * env.g * std::sin(terrain.slope_rad);
    f.accel_force_N = m * robot.v_max_mps / robot.accel_time_s;
  } else {
    // As printed: F_fr = M*mu_rr, F_s = M*sin(theta), F_a = M*V/(g*T).
    f.friction_N = m * terrain.mu_rr;
    f.slope_force_N = m * std::sin(terrain.slope_rad);
    f.accel_force_N = m * robot.v_max_mps / (env.g * robot.accel_time_s);
  }
  f.total_N = f.friction_N + f.slope_force_N + f.accel_force_N;
  return f;
}

TorqueRequirement required_torque(const ForceBreakdown& forces, const RobotParams& robot, FormulaMode mode) {
  if (forces.mode != mode) {
    throw InvariantError("mode", "force breakdown was computed in " + std::string(to_string(forces.mode)) +
                                     " mode but torque was requested in " + std::string(to_string(mode)));
  }
  if (robot.num_wheels < 1) {
    throw InvariantError("num_wheels", "num_wheels must be >= 1");
  }
  // eta multiplies in the literal form; in corrected form it is an added loss.
  const double eta = mode == FormulaMode::Corrected ? 1.0 + robot.resistance_factor : robot.resistance_factor;
  TorqueRequirement t;
  t.total_Nm = forces.total_N * robot.wheel_radius_m * eta;
  t.per_wheel_Nm = t.total_Nm / robot.num_wheels;
  return t;
}

double traction_limit(const RobotParams& robot, const TerrainSpec& terrain, FormulaMode mode) {
  if (mode == FormulaMode::Corrected) {
    return robot.num_wheels * robot.normal_force_per_wheel_N * terrain.mu;
  }
  return robot.normal_force_per_wheel_N * terrain.mu * robot.wheel_diameter_m;
}

DrivetrainSolution size_gear_train(const RobotParams& robot, const TerrainSpec& terrain,
                                   const GravityEnvironment& env, std::span<const MotorSpec> catalog,
                                   const DrivetrainConfig& reductions, FormulaMode mode) {
  if (catalog.empty()) {
    throw InvariantError("drivetrain.motors", "motor catalog must not be empty");
  }
  for (const auto& m : catalog) {
    if (!(m.rated_torque_Nm > 0.0) || !(m.no_load_speed_radps > 0.0)) {
      throw InvariantError("drivetrain.motors", "motor '" + m.name + "' needs positive torque and speed");
    }
  }

  const ForceBreakdown forces = tractive_forces(robot, terrain, env, mode);
  const TorqueRequirement torque = required_torque(forces, robot, mode);

  DrivetrainSolution sol;
  sol.mode = mode;
  sol.tractive_force_N = forces.total_N;
  sol.required_torque_total_Nm = torque.total_Nm;
  sol.required_torque_per_wheel_Nm = torque.per_wheel_Nm;
  sol.traction_limit_N = traction_limit(robot, terrain, mode);

  const double v_floor = robot.v_max_mps;
  // A rover with no speed requirement puts no upper bound on rim speed.
  const double v_ceiling = robot.v_max_mps > 0.0 ? reductions.max_speed_factor * robot.v_max_mps
                                                 : std::numeric_limits<double>::infinity();

  bool any_torque_ok = false;
  using Key = std::tuple<double, std::size_t, double>;
  Key best{std::numeric_limits<double>::infinity(), 0, 0.0};
  bool found = false;

  for (std::size_t mi = 0; mi < catalog.size(); ++mi) {
    const auto& motor = catalog[mi];
    for (double primary : reductions.primary_reductions) {
      for (double secondary : reductions.secondary_reductions) {
        const double total = primary * secondary;
        if (motor.rated_torque_Nm * total < torque.per_wheel_Nm) continue;
        any_torque_ok = true;
        const double rim_speed = motor.no_load_speed_radps / total * robot.wheel_radius_m;
        if (rim_speed < v_floor || rim_speed > v_ceiling) continue;
        const Key key{total, mi, secondary};
        if (!found || key < best) {
          best = key;
          found = true;
          sol.motor = motor.name;
          sol.gear_ratio_primary = primary;
          sol.gear_ratio_secondary = secondary;
          sol.output_speed_mps = rim_speed;
        }
      }
    }
  }

  if (!found) {
    sol.feasible = false;
    sol.binding = any_torque_ok ? BindingConstraint::Speed : BindingConstraint::Torque;
    return sol;
  }
  if (forces.total_N > sol.traction_limit_N) {
    sol.feasible = false;
    sol.binding = BindingConstraint::Traction;
    return sol;
  }
  sol.feasible = true;
  return sol;
}

namespace {

double sweep_point(const RobotParams& base, const TerrainSpec& terrain, const GravityEnvironment& env,
                   FormulaMode mode, const SweepPoint& p) {
  RobotParams r = base;
  r.mass_kg = p.mass_kg;
  r.v_max_mps = p.v_max_mps;
  TerrainSpec t = terrain;
  t.mu_rr = p.mu_rr;
  t.slope_rad = p.slope_rad;
  return tractive_forces(r, t, env, mode).total_N;
}

}  // namespace

std::vector<double> sweep_tractive_forces_serial(const RobotParams& base, const TerrainSpec& terrain,
                                                 const GravityEnvironment& env, FormulaMode mode,
                                                 std::span<const SweepPoint> points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = sweep_point(base, terrain, env, mode, points[i]);
  }
  return out;
}

std::vector<double> sweep_tractive_forces_parallel(const RobotParams& base, const TerrainSpec& terrain,
                                                   const GravityEnvironment& env, FormulaMode mode,
                                                   std::span<const SweepPoint> points) {
  std::vector<double> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = sweep_point(base, terrain, env, mode, points[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace sphere
