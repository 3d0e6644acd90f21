#include "sphere/traverse_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

namespace sphere {

bool Course::on_slope(double distance_m) const {
  return slope_length_m > 0.0 && distance_m >= slope_start_m && distance_m < slope_start_m + slope_length_m;
}

double SlipModel::slip_mean(const TerrainSpec& terrain, const GravityEnvironment& env, bool on_slope) const {
  const auto find = [&](bool slope) -> const SlipEntry* {
    for (const auto& e : entries) {
      if (e.terrain == terrain.name && e.gravity == env.name && e.on_slope == slope) return &e;
    }
    return nullptr;
  };
  if (on_slope) {
    if (const auto* e = find(true)) return e->slip_mean;
  }
  if (const auto* e = find(false)) return e->slip_mean;
  return terrain.slip_mean;
}

SlipModel SlipModel::measured() {
  SlipModel m;
  m.entries = {
      {"sand", "moon", false, 0.23},
      {"sand", "moon", true, 0.47},
      {"rocky", "moon", false, 0.29},
      {"sand-7mm", "moon", false, 0.15},
      {"sand", "mars", false, 0.07},
  };
  return m;
}

namespace {

void check_traverse_inputs(const RobotParams& robot, const Course& course, double set_speed_m_per_min,
                           double dt_s, TraverseLimits limits) {
  if (!(dt_s > 0.0)) throw InvariantError("dt_s", "time step must be > 0");
  if (!(set_speed_m_per_min > 0.0)) throw InvariantError("set_speed", "set speed must be > 0");
  if (set_speed_m_per_min > robot.v_max_mps * 60.0 * (1.0 + 1e-12)) {
    throw InvariantError("set_speed", "set speed exceeds the rover's V_max");
  }
  if (!(course.length_m > 0.0)) throw InvariantError("course.length_m", "course length must be > 0");
  if (course.slope_length_m < 0.0 || course.slope_start_m < 0.0 ||
      course.slope_start_m + course.slope_length_m > course.length_m * (1.0 + 1e-12)) {
    throw InvariantError("course.slope", "slope segment must lie within the course");
  }
  if (limits.lomass) {
    if (course.length_m > TraverseLimits::kMaxCourseLength_m) {
      throw InvariantError("course.length_m", "course exceeds the testbed travel of 1.80 m");
    }
    if (set_speed_m_per_min > TraverseLimits::kMaxGantrySpeed_m_per_min) {
      throw InvariantError("set_speed", "set speed exceeds the gantry limit of 10 m/min");
    }
  }
}

}  // namespace

SimTrace simulate_traverse(const RobotParams& robot, const Course& course, const GravityEnvironment& env,
                           double set_speed_m_per_min, double dt_s, std::uint64_t seed, const SlipModel& model,
                           TraverseLimits limits) {
  check_traverse_inputs(robot, course, set_speed_m_per_min, dt_s, limits);

  const double set = set_speed_m_per_min / 60.0;
  const double sd = course.terrain.slip_sd;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  double smoothed = model.slip_mean(course.terrain, env, course.on_slope(0.0));
  const auto next_slip = [&](double distance) {
    const double mean = model.slip_mean(course.terrain, env, course.on_slope(distance));
    const double draw = mean + sd * unit(rng);
    smoothed = model.smoothing * smoothed + (1.0 - model.smoothing) * draw;
    smoothed = std::clamp(smoothed, 0.0, model.max_slip);
    return smoothed;
  };
  const auto power_at = [&](double slip) {
    return robot.standby_power_W +
           (robot.motion_power_W - robot.standby_power_W) * (1.0 + model.power_slip_gain * slip);
  };

  SimTrace trace;
  trace.seed = seed;
  trace.dt_s = dt_s;

  double slip = next_slip(0.0);
  TraverseSample cur{0.0, set, set * (1.0 - slip), slip, power_at(slip), 0.0};
  trace.samples.push_back(cur);

  for (;;) {
    const double s_next = next_slip(cur.distance_m);
    const double v_next = set * (1.0 - s_next);
    const double step = 0.5 * (cur.actual_speed_mps + v_next) * dt_s;
    const double remaining = course.length_m - cur.distance_m;
    if (step >= remaining) {
      // Speed is linear across the step, so distance is quadratic in tau.
      const double a = (v_next - cur.actual_speed_mps) / (2.0 * dt_s);
      const double b = cur.actual_speed_mps;
      double tau = 2.0 * remaining / (b + std::sqrt(b * b + 4.0 * a * remaining));
      tau = std::clamp(tau, 0.0, dt_s);
      const double v_end = b + (v_next - b) * tau / dt_s;
      const double s_end = 1.0 - v_end / set;
      trace.samples.push_back({cur.t_s + tau, set, v_end, s_end, power_at(s_end), course.length_m});
      break;
    }
    cur = {cur.t_s + dt_s, set, v_next, s_next, power_at(s_next), cur.distance_m + step};
    trace.samples.push_back(cur);
  }
  return trace;
}

TraverseSummary trace_summary(const SimTrace& trace, double set_speed_m_per_min) {
  if (trace.samples.size() < 2) throw InvariantError("trace", "trace needs at least two samples");
  TraverseSummary s;
  const auto& last = trace.samples.back();
  s.elapsed_s = last.t_s - trace.samples.front().t_s;
  s.distance_m = last.distance_m - trace.samples.front().distance_m;
  double energy_J = 0.0;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const auto& a = trace.samples[i - 1];
    const auto& b = trace.samples[i];
    energy_J += 0.5 * (a.power_W + b.power_W) * (b.t_s - a.t_s);
  }
  s.energy_Wh = energy_J / 3600.0;
  s.avg_speed_m_per_min = s.distance_m / s.elapsed_s * 60.0;
  s.avg_slip = 1.0 - s.avg_speed_m_per_min / set_speed_m_per_min;
  s.avg_power_W = energy_J / s.elapsed_s;
  return s;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "t_s,set_speed_mps,actual_speed_mps,slip,power_w,distance_m\n";
  char line[192];
  for (const auto& s : trace.samples) {
    std::snprintf(line, sizeof line, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", s.t_s, s.set_speed_mps,
                  s.actual_speed_mps, s.slip, s.power_W, s.distance_m);
    out << line;
  }
}

std::string trace_csv(const SimTrace& trace) {
  std::ostringstream os;
  write_trace_csv(trace, os);
  return os.str();
}

namespace {

TraverseSummary run_one(const TraverseBatch& b, std::size_t i) {
  const SimTrace trace = simulate_traverse(*b.robot, *b.course, *b.env, b.set_speed_m_per_min, b.dt_s,
                                           b.base_seed + i, *b.model, b.limits);
  return trace_summary(trace, b.set_speed_m_per_min);
}

}  // namespace

std::vector<TraverseSummary> run_traverse_batch_serial(const TraverseBatch& batch) {
  std::vector<TraverseSummary> out(batch.runs);
  for (std::size_t i = 0; i < batch.runs; ++i) out[i] = run_one(batch, i);
  return out;
}

std::vector<TraverseSummary> run_traverse_batch_parallel(const TraverseBatch& batch) {
  // Exceptions cannot cross the parallel region, so check inputs up front.
  check_traverse_inputs(*batch.robot, *batch.course, batch.set_speed_m_per_min, batch.dt_s, batch.limits);
  std::vector<TraverseSummary> out(batch.runs);
  const auto n = static_cast<std::ptrdiff_t>(batch.runs);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(batch, static_cast<std::size_t>(i));
  }
  return out;
}

BatchStats summarize(std::span<const TraverseSummary> runs) {
  BatchStats st;
  st.runs = runs.size();
  if (runs.empty()) return st;
  const auto stat = [&](auto field) {
    double sum = 0.0;
    for (const auto& r : runs) sum += field(r);
    const double mean = sum / static_cast<double>(runs.size());
    double ss = 0.0;
    for (const auto& r : runs) ss += (field(r) - mean) * (field(r) - mean);
    const double sd = runs.size() > 1 ? std::sqrt(ss / static_cast<double>(runs.size() - 1)) : 0.0;
    return Stat{mean, sd};
  };
  st.elapsed_s = stat([](const TraverseSummary& r) { return r.elapsed_s; });
  st.speed_m_per_min = stat([](const TraverseSummary& r) { return r.avg_speed_m_per_min; });
  st.slip = stat([](const TraverseSummary& r) { return r.avg_slip; });
  st.power_W = stat([](const TraverseSummary& r) { return r.avg_power_W; });
  return st;
}

}  // namespace sphere
