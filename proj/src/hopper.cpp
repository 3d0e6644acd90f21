#include "sphere/hopper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphere {

namespace {

// ceil() that leaves values within 1e-9 (relative) of an integer on that integer.
double snapped_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

constexpr int kMaxSpringIterations = 100;
constexpr double kSpringTolerance = 1e-9;

}  // namespace

double hop_energy(double mass_kg, const GravityEnvironment& env, double height_m) {
  if (!(mass_kg > 0.0)) throw InvariantError("mass_kg", "mass must be > 0");
  if (!(height_m >= 0.0)) throw InvariantError("height_m", "hop height must be >= 0");
  return mass_kg * env.g * height_m;
}

double required_spring_constant(double energy_J, double cam_angle_rad) {
  if (!(cam_angle_rad > 0.0)) throw InvariantError("cam_angle_rad", "cam angle must be > 0");
  return 2.0 * energy_J / (cam_angle_rad * cam_angle_rad);
}

SpringLoads spring_loads(double k, double cam_angle_rad, double spring_length_m) {
  if (!(spring_length_m > 0.0)) throw InvariantError("spring_length_m", "spring length must be > 0");
  const double torque = k * cam_angle_rad;
  return {torque, torque / spring_length_m};
}

SpringCount spring_count(double force_N, const SpringSpec& spring) {
  validate(spring);
  if (!(force_N > 0.0)) throw InvariantError("force_N", "spring force must be > 0");

  const double t3 = spring.thickness_m * spring.thickness_m * spring.thickness_m;
  const double l3 = spring.length_m * spring.length_m * spring.length_m;
  const double ratio = force_N * l3 / (spring.youngs_modulus_Pa * spring.max_deflection_m * spring.width_m * t3);

  SpringCount out;
  if (!spring.equal_length_count) {
    out.psi = 1.0;
    out.continuous = ratio;
    out.count = std::max(1, static_cast<int>(snapped_ceil(ratio)));
    return out;
  }

  const double n_prime = *spring.equal_length_count;
  if (n_prime >= 3.0 * ratio) {
    throw InvariantError("spring.n_prime",
                         "no positive spring count: n' must be < 3 F L^3 / (E s b t^3)");
  }
  const auto update = [&](double n) { return 3.0 * ratio / (2.0 + n_prime / n); };

  // Relaxed fixed point; the relaxation factor comes from a secant estimate of
  // the update's slope so slow contraction (n' close to 3R) still settles fast.
  double prev = ratio;
  double prev_g = update(prev);
  double n = prev_g;
  int it = 1;
  while (it < kMaxSpringIterations) {
    const double g = update(n);
    double omega = 1.0;
    const double dn = n - prev;
    if (dn != 0.0) {
      const double slope = (g - prev_g) / dn;
      if (std::isfinite(slope) && slope < 1.0) omega = std::clamp(1.0 / (1.0 - slope), 0.1, 1e6);
    }
    double next = n + omega * (g - n);
    while (next <= 0.0) {
      omega *= 0.5;
      next = n + omega * (g - n);
    }
    ++it;
    prev = n;
    prev_g = g;
    const double step = next - n;
    n = next;
    if (std::abs(step) < kSpringTolerance) {
      out.continuous = n;
      out.psi = 3.0 / (2.0 + n_prime / n);
      out.count = std::max(1, static_cast<int>(snapped_ceil(n)));
      out.iterations = it;
      return out;
    }
  }
  throw std::runtime_error("spring count iteration did not converge in 100 steps");
}

double scale_hop_height(double h_ref_m, const GravityEnvironment& env_ref, const GravityEnvironment& env_target) {
  if (!(env_target.g > 0.0)) throw InvariantError("gravity", "target gravity must be > 0");
  return h_ref_m * env_ref.g / env_target.g;
}

HopperDesign design_hopper(const RobotParams& robot, const GravityEnvironment& env, const SpringSpec& spring) {
  HopperDesign d;
  d.design_hop_height_m = robot.design_hop_height_m;
  d.cam_angle_rad = robot.cam_angular_throw_rad;
  d.stored_energy_J = hop_energy(robot.mass_kg, env, robot.design_hop_height_m);
  d.spring_constant_Nm_per_rad = required_spring_constant(d.stored_energy_J, d.cam_angle_rad);
  const SpringLoads loads = spring_loads(d.spring_constant_Nm_per_rad, d.cam_angle_rad, spring.length_m);
  d.spring_torque_Nm = loads.torque_Nm;
  d.spring_force_N = loads.force_N;
  const SpringCount n = spring_count(d.spring_force_N, spring);
  d.spring_count = n.count;
  d.psi = n.psi;
  return d;
}

HopTrajectory simulate_hop(double energy_J, double mass_kg, const GravityEnvironment& env,
                           const HopOptions& options) {
  if (!(mass_kg > 0.0)) throw InvariantError("mass_kg", "mass must be > 0");
  if (!(energy_J > 0.0)) throw InvariantError("energy_J", "launch energy must be > 0");
  if (!(options.efficiency > 0.0 && options.efficiency <= 1.0)) {
    throw InvariantError("efficiency", "efficiency must be in (0, 1]");
  }
  if (!(options.dt_s > 0.0)) throw InvariantError("dt_s", "dt must be > 0");
  if (!(options.launch_angle_rad > 0.0 && options.launch_angle_rad < std::numbers::pi)) {
    throw InvariantError("launch_angle_rad", "launch angle must be in (0, pi)");
  }

  const double g = env.g;
  const double dt = options.dt_s;
  HopTrajectory traj;
  traj.efficiency = options.efficiency;
  traj.launch_angle_rad = options.launch_angle_rad;
  traj.launch_speed_mps = std::sqrt(2.0 * options.efficiency * energy_J / mass_kg);

  const double vx = traj.launch_speed_mps * std::cos(options.launch_angle_rad);
  double vz = traj.launch_speed_mps * std::sin(options.launch_angle_rad);
  double x = 0.0;
  double z = 0.0;
  double t = 0.0;
  traj.samples.push_back({t, x, z, vz});

  for (;;) {
    const double v_half = vz - 0.5 * g * dt;
    const double z_next = z + v_half * dt;
    if (z_next <= 0.0) {
      // Land inside this step: z + vz*tau - g*tau^2/2 = 0.
      const double tau = (vz + std::sqrt(vz * vz + 2.0 * g * z)) / g;
      t += tau;
      x += vx * tau;
      vz -= g * tau;
      traj.samples.push_back({t, x, 0.0, vz});
      break;
    }
    z = z_next;
    vz = v_half - 0.5 * g * dt;
    x += vx * dt;
    t += dt;
    traj.samples.push_back({t, x, z, vz});
  }

  traj.flight_time_s = t;
  traj.range_m = x;
  for (const auto& s : traj.samples) traj.apex_height_m = std::max(traj.apex_height_m, s.height_m);
  return traj;
}

}  // namespace sphere
