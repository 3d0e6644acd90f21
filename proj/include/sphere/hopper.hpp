#pragma once

#include <optional>
#include <vector>

#include "sphere/core_model.hpp"

namespace sphere {

/// Sized hopping mechanism. `spring_force_N` is the force on the cam
/// follower, unrelated to the drive-train slope force.
struct HopperDesign {
  double stored_energy_J = 0.0;
  double spring_constant_Nm_per_rad = 0.0;
  double cam_angle_rad = 0.0;
  double spring_torque_Nm = 0.0;
  double spring_force_N = 0.0;
  int spring_count = 0;
  double psi = 1.0;
  double design_hop_height_m = 0.0;
};

struct SpringLoads {
  double torque_Nm = 0.0;
  double force_N = 0.0;
};

struct SpringCount {
  int count = 0;
  /// Real-valued solution of n = Psi(n) * F L^3 / (E s b t^3) before the ceiling.
  double continuous = 0.0;
  double psi = 1.0;
  int iterations = 0;
};

struct HopSample {
  double t_s;
  double horizontal_m;
  double height_m;
  double vertical_velocity_mps;
};

struct HopTrajectory {
  std::vector<HopSample> samples;
  double apex_height_m = 0.0;
  double flight_time_s = 0.0;
  double range_m = 0.0;
  double launch_speed_mps = 0.0;
  double launch_angle_rad = 0.0;
  double efficiency = 1.0;
};

/// E = M g H.
double hop_energy(double mass_kg, const GravityEnvironment& env, double height_m);

/// k = 2E / theta^2, in N m / rad.
double required_spring_constant(double energy_J, double cam_angle_rad);

SpringLoads spring_loads(double k, double cam_angle_rad, double spring_length_m);

/// Leaf-spring count for a follower force. With all springs of equal length
/// Psi = 1 and the count is a ceiling of F L^3 / (E s b t^3); otherwise the
/// fixed point of n = 3R / (2 + n'/n) is iterated to |dn| < 1e-9 first.
/// Throws std::runtime_error if the iteration does not settle in 100 steps
/// and InvariantError if no positive root exists (n' >= 3R).
SpringCount spring_count(double force_N, const SpringSpec& spring);

/// Hop height reached at `env_target` with the launch energy that gives
/// `h_ref_m` at `env_ref`.
double scale_hop_height(double h_ref_m, const GravityEnvironment& env_ref, const GravityEnvironment& env_target);

/// Full sizing chain: energy for the design height at `env`, stiffness for the
/// cam throw, spring loads, spring count.
HopperDesign design_hopper(const RobotParams& robot, const GravityEnvironment& env, const SpringSpec& spring);

struct HopOptions {
  double launch_angle_rad = 1.5707963267948966;  // vertical
  double efficiency = 1.0;
  double dt_s = 1e-4;
};

/// Drag-free point-mass hop launched with v = sqrt(2 lambda E / M). Stepped
/// with kick-drift-kick leapfrog; the landing sample is placed exactly at
/// height zero.
HopTrajectory simulate_hop(double energy_J, double mass_kg, const GravityEnvironment& env,
                           const HopOptions& options = {});

}  // namespace sphere
