#pragma once

#include <filesystem>
#include <random>

#include "sphere/core_model.hpp"

namespace sphere::test {

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(SPHERE_SOURCE_DIR) / rel;
}

inline std::filesystem::path example_config() { return source_path("configs/spherex.json"); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline RobotParams random_robot(std::mt19937_64& rng) {
  RobotParams r;
  r.mass_kg = uniform(rng, 0.2, 20.0);
  r.wheel_radius_m = uniform(rng, 0.02, 0.5);
  r.wheel_diameter_m = 2.0 * r.wheel_radius_m * uniform(rng, 0.985, 1.015);
  r.num_wheels = std::uniform_int_distribution<int>(1, 6)(rng);
  r.v_max_mps = uniform(rng, 0.005, 1.0);
  r.accel_time_s = uniform(rng, 0.1, 5.0);
  r.resistance_factor = uniform(rng, 0.0, 1.0);
  r.normal_force_per_wheel_N = uniform(rng, 0.1, 50.0);
  r.standby_power_W = uniform(rng, 1.0, 20.0);
  r.motion_power_W = r.standby_power_W + uniform(rng, 0.1, 20.0);
  r.hop_power_W = uniform(rng, 1.0, 30.0);
  r.hop_cycle_s = uniform(rng, 0.5, 10.0);
  r.cam_linear_throw_m = uniform(rng, 0.005, 0.05);
  r.cam_angular_throw_rad = uniform(rng, 0.05, 1.5);
  r.design_hop_height_m = uniform(rng, 0.01, 1.0);
  return r;
}

inline TerrainSpec random_terrain(std::mt19937_64& rng, int index) {
  TerrainSpec t;
  t.name = "terrain-" + std::to_string(index);
  t.mu = uniform(rng, 0.05, 2.0);
  t.mu_rr = uniform(rng, 0.0, t.mu);
  t.slope_rad = uniform(rng, 0.0, 1.5);
  t.sinkage_m = uniform(rng, 0.0, 0.05);
  t.slip_mean = uniform(rng, 0.0, 0.9);
  t.slip_sd = uniform(rng, 0.0, 0.2);
  return t;
}

}  // namespace sphere::test
