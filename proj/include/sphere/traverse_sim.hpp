#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphere/core_model.hpp"

namespace sphere {

/// Straight test course with at most one constant-grade segment.
struct Course {
  double length_m = 1.4;
  double slope_rad = 0.0;
  double slope_start_m = 0.0;
  double slope_length_m = 0.0;
  TerrainSpec terrain;

  bool on_slope(double distance_m) const;
};

/// Mean slip for one (terrain, gravity, flat/slope) combination. The data only
/// gives aggregate slip per run, so these are table entries, not a formula.
struct SlipEntry {
  std::string terrain;
  std::string gravity;
  bool on_slope = false;
  double slip_mean = 0.0;
};

struct SlipModel {
  std::vector<SlipEntry> entries;
  /// s_k = smoothing * s_{k-1} + (1 - smoothing) * draw_k.
  double smoothing = 0.5;
  double max_slip = 0.95;
  /// kappa in P = P_standby + (P_motion - P_standby) * (1 + kappa * slip).
  double power_slip_gain = 0.3;

  /// Looks up (terrain, gravity, on_slope); a missing slope entry falls back
  /// to the flat one and a missing flat entry to the terrain's own slip_mean.
  double slip_mean(const TerrainSpec& terrain, const GravityEnvironment& env, bool on_slope) const;

  /// Lunar and Martian sand/gravel entries from the simulated-gravity runs.
  static SlipModel measured();
};

/// Testbed limits, enforced only when requested.
struct TraverseLimits {
  bool lomass = false;
  static constexpr double kMaxCourseLength_m = 1.80;
  static constexpr double kMaxGantrySpeed_m_per_min = 10.0;
};

struct TraverseSample {
  double t_s;
  double set_speed_mps;
  double actual_speed_mps;
  double slip;
  double power_W;
  double distance_m;
};

struct SimTrace {
  std::vector<TraverseSample> samples;
  std::uint64_t seed = 0;
  double dt_s = 0.1;
};

struct TraverseSummary {
  double elapsed_s = 0.0;
  double avg_speed_m_per_min = 0.0;
  double avg_slip = 0.0;
  double avg_power_W = 0.0;
  double energy_Wh = 0.0;
  double distance_m = 0.0;
};

/// Seeded kinematic traverse. Each step draws a slip, smooths and clamps it,
/// and advances distance by trapezoidal integration of actual speed; the final
/// step is shortened so the run ends exactly at the course length.
/// Throws InvariantError if the set speed exceeds V_max (or the gantry limit
/// under `limits.lomass`), the course is too long for the testbed, or dt <= 0.
SimTrace simulate_traverse(const RobotParams& robot, const Course& course, const GravityEnvironment& env,
                           double set_speed_m_per_min, double dt_s, std::uint64_t seed,
                           const SlipModel& model = SlipModel::measured(), TraverseLimits limits = {});

TraverseSummary trace_summary(const SimTrace& trace, double set_speed_m_per_min);

/// CSV with header `t_s,set_speed_mps,actual_speed_mps,slip,power_w,distance_m`,
/// 6 significant digits.
void write_trace_csv(const SimTrace& trace, std::ostream& out);
std::string trace_csv(const SimTrace& trace);

struct TraverseBatch {
  const RobotParams* robot;
  const Course* course;
  const GravityEnvironment* env;
  const SlipModel* model;
  double set_speed_m_per_min;
  double dt_s;
  std::uint64_t base_seed;
  std::size_t runs;
  TraverseLimits limits{};
};

/// Runs `runs` traverses with seeds base_seed + i. The serial version is the
/// reference; the OpenMP version must return identical summaries.
std::vector<TraverseSummary> run_traverse_batch_serial(const TraverseBatch& batch);
std::vector<TraverseSummary> run_traverse_batch_parallel(const TraverseBatch& batch);

struct Stat {
  double mean = 0.0;
  double sd = 0.0;
};

struct BatchStats {
  Stat elapsed_s;
  Stat speed_m_per_min;
  Stat slip;
  Stat power_W;
  std::size_t runs = 0;
};

BatchStats summarize(std::span<const TraverseSummary> runs);

}  // namespace sphere
