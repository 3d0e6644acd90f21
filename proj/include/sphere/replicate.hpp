#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphere/traverse_sim.hpp"

namespace sphere {

/// Figures reported for one simulated-gravity testbed run. Any of them may be
/// missing from the write-up.
struct MeasuredRun {
  std::optional<double> distance_m;
  std::optional<double> elapsed_s;
  std::optional<double> speed_m_per_min;
  std::optional<double> slip;
  std::optional<double> power_W;
};

struct ExperimentFixture {
  std::string name;
  std::string description;
  Course course;
  std::string gravity;  // built-in environment name
  double set_speed_m_per_min = 1.5;
  /// Power the calibrated motion power is tuned to reproduce.
  double power_target_W = 20.0;
  MeasuredRun published;
};

/// lunar-sand, lunar-sand-slope10, lunar-rocky, lunar-sand-7mm, mars-sand.
const std::vector<ExperimentFixture>& experiment_fixtures();
const ExperimentFixture& find_experiment(std::string_view name);

/// Time-weighted mean slip expected over the course, from the segment means.
double expected_course_slip(const ExperimentFixture& fixture, const SlipModel& model);

/// Motion power that makes the affine power model average `power_target_W`
/// at the expected slip: P_m = P_s + (target - P_s) / (1 + kappa * s).
double calibrated_motion_power(const ExperimentFixture& fixture, const RobotParams& robot, const SlipModel& model);

struct Comparison {
  std::string quantity;
  std::string unit;
  Stat simulated;
  std::optional<double> published;
  std::optional<double> relative_error;
};

struct ReplicationReport {
  std::string experiment;
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;
  double motion_power_W = 0.0;
  BatchStats stats;
  std::vector<Comparison> comparisons;
  /// Internal inconsistencies among the reported figures for this run.
  std::vector<std::string> flags;
};

/// Consistency flags for a set of reported figures (distance/time vs stated
/// speed beyond 5 %, stated slip vs implied slip beyond 2 points).
std::vector<std::string> consistency_flags(const ExperimentFixture& fixture);

struct ReplicateOptions {
  std::size_t runs = 100;
  std::uint64_t base_seed = 1;
  double dt_s = 0.1;
  bool parallel = true;
};

/// Runs the fixture `runs` times with seeds base_seed + i. Throws
/// InvariantError for an unknown experiment name.
ReplicationReport replicate_experiment(std::string_view name, const RobotParams& robot,
                                       const ReplicateOptions& options = {},
                                       const SlipModel& model = SlipModel::measured());

}  // namespace sphere
