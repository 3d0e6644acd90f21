#include "sphere/replicate.hpp"

#include <cmath>
#include <cstdio>

namespace sphere {

namespace {

TerrainSpec fixture_terrain(std::string name, double slip_mean) {
  return {std::move(name), 0.6, 0.15, 0.0, 0.010, slip_mean, 0.05};
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

const std::vector<ExperimentFixture>& experiment_fixtures() {
  static const std::vector<ExperimentFixture> fixtures = [] {
    std::vector<ExperimentFixture> f;

    ExperimentFixture sand;
    sand.name = "lunar-sand";
    sand.description = "level loose sand, 10 mm grousers, lunar gravity";
    sand.course = {1.4, 0.0, 0.0, 0.0, fixture_terrain("sand", 0.23)};
    sand.gravity = "moon";
    sand.power_target_W = 20.0;
    sand.published = {1.4, 75.0, 1.1, 0.23, 20.0};
    f.push_back(sand);

    ExperimentFixture slope;
    slope.name = "lunar-sand-slope10";
    slope.description = "0.1 m level sand then 0.4 m of 10 deg slope, lunar gravity";
    slope.course = {0.5, deg_to_rad(10.0), 0.1, 0.4, fixture_terrain("sand", 0.23)};
    slope.gravity = "moon";
    slope.power_target_W = 22.3;
    slope.published = {0.5, 31.0, 0.77, 0.47, 22.3};
    f.push_back(slope);

    ExperimentFixture rocky;
    rocky.name = "lunar-rocky";
    rocky.description = "rocky and graveled terrain, 10 mm grousers, lunar gravity";
    rocky.course = {1.4, 0.0, 0.0, 0.0, fixture_terrain("rocky", 0.29)};
    rocky.gravity = "moon";
    rocky.power_target_W = 21.4;
    rocky.published = {1.4, 80.0, 1.05, 0.29, 21.4};
    f.push_back(rocky);

    ExperimentFixture seven;
    seven.name = "lunar-sand-7mm";
    seven.description = "level loose sand, 7 mm grousers, lunar gravity";
    seven.course = {1.4, 0.0, 0.0, 0.0, fixture_terrain("sand-7mm", 0.15)};
    seven.gravity = "moon";
    seven.power_target_W = 20.6;
    seven.published = {std::nullopt, std::nullopt, std::nullopt, 0.15, 20.6};
    f.push_back(seven);

    ExperimentFixture mars;
    mars.name = "mars-sand";
    mars.description = "level loose sand, 10 mm grousers, Martian gravity";
    mars.course = {1.4, 0.0, 0.0, 0.0, fixture_terrain("sand", 0.23)};
    mars.gravity = "mars";
    mars.power_target_W = 21.9;
    mars.published = {std::nullopt, std::nullopt, 1.33, 0.07, 21.9};
    f.push_back(mars);

    return f;
  }();
  return fixtures;
}

const ExperimentFixture& find_experiment(std::string_view name) {
  for (const auto& f : experiment_fixtures()) {
    if (f.name == name) return f;
  }
  throw InvariantError("experiment", "unknown experiment '" + std::string(name) + "'");
}

double expected_course_slip(const ExperimentFixture& fixture, const SlipModel& model) {
  const auto env = gravity_env(fixture.gravity);
  const auto& c = fixture.course;
  const double flat_len = c.length_m - c.slope_length_m;
  const double s_flat = model.slip_mean(c.terrain, env, false);
  const double s_slope = model.slip_mean(c.terrain, env, true);
  // Time on a segment is proportional to length / (1 - slip).
  const double t_flat = flat_len / (1.0 - s_flat);
  const double t_slope = c.slope_length_m / (1.0 - s_slope);
  return (t_flat * s_flat + t_slope * s_slope) / (t_flat + t_slope);
}

double calibrated_motion_power(const ExperimentFixture& fixture, const RobotParams& robot,
                               const SlipModel& model) {
  const double s = expected_course_slip(fixture, model);
  return robot.standby_power_W +
         (fixture.power_target_W - robot.standby_power_W) / (1.0 + model.power_slip_gain * s);
}

std::vector<std::string> consistency_flags(const ExperimentFixture& fixture) {
  std::vector<std::string> flags;
  const auto& p = fixture.published;
  std::optional<double> speed_basis = p.speed_m_per_min;
  if (p.distance_m && p.elapsed_s) {
    const double measured = *p.distance_m / *p.elapsed_s * 60.0;
    if (p.speed_m_per_min && std::abs(measured - *p.speed_m_per_min) > 0.05 * *p.speed_m_per_min) {
      flags.push_back(fixture.name + ": " +
                      fmt("reported distance/time gives %.3f m/min but the stated average speed is %.2f m/min",
                          measured, *p.speed_m_per_min));
    }
    speed_basis = measured;
  }
  if (speed_basis && p.slip) {
    const double implied = 1.0 - *speed_basis / fixture.set_speed_m_per_min;
    if (std::abs(implied - *p.slip) > 0.02) {
      flags.push_back(fixture.name + ": " +
                      fmt("reported speed implies %.1f%% slip but the stated slip is %.0f%%", implied * 100.0,
                          *p.slip * 100.0));
    }
  }
  return flags;
}

ReplicationReport replicate_experiment(std::string_view name, const RobotParams& robot,
                                       const ReplicateOptions& options, const SlipModel& model) {
  const ExperimentFixture& fixture = find_experiment(name);
  const GravityEnvironment env = gravity_env(fixture.gravity);

  RobotParams tuned = robot;
  tuned.motion_power_W = calibrated_motion_power(fixture, robot, model);

  TraverseBatch batch{&tuned,         &fixture.course,    &env,          &model, fixture.set_speed_m_per_min,
                      options.dt_s,   options.base_seed,  options.runs,  TraverseLimits{true}};
  const auto runs = options.parallel ? run_traverse_batch_parallel(batch) : run_traverse_batch_serial(batch);

  ReplicationReport r;
  r.experiment = fixture.name;
  r.runs = options.runs;
  r.base_seed = options.base_seed;
  r.motion_power_W = tuned.motion_power_W;
  r.stats = summarize(runs);

  const auto compare = [&](std::string q, std::string unit, Stat sim, std::optional<double> published) {
    Comparison c{std::move(q), std::move(unit), sim, published, std::nullopt};
    if (published && *published != 0.0) c.relative_error = (sim.mean - *published) / *published;
    r.comparisons.push_back(std::move(c));
  };
  const auto& p = fixture.published;
  compare("elapsed", "s", r.stats.elapsed_s, p.elapsed_s);
  compare("average speed", "m/min", r.stats.speed_m_per_min, p.speed_m_per_min);
  if (p.distance_m && p.elapsed_s) {
    compare("average speed (distance/time)", "m/min", r.stats.speed_m_per_min, *p.distance_m / *p.elapsed_s * 60.0);
  }
  compare("slip", "fraction", r.stats.slip, p.slip);
  compare("average power (calibrated)", "W", r.stats.power_W, p.power_W);

  r.flags = consistency_flags(fixture);
  return r;
}

}  // namespace sphere
