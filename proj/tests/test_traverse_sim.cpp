#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "sphere/replicate.hpp"
#include "sphere/traverse_sim.hpp"
#include "support.hpp"

using namespace sphere;

namespace {

const GravityEnvironment kMoon{"moon", 1.62};

Course plain_course(double length, double slip_mean, double slip_sd, std::string name = "test-soil") {
  Course c;
  c.length_m = length;
  c.terrain = {std::move(name), 0.6, 0.15, 0.0, 0.01, slip_mean, slip_sd};
  return c;
}

bool same(const TraverseSummary& a, const TraverseSummary& b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST(Traverse, NoSlipKinematics) {
  const RobotParams r = reference_robot();
  const auto trace = simulate_traverse(r, plain_course(1.4, 0.0, 0.0), kMoon, 1.5, 0.1, 1);
  const auto s = trace_summary(trace, 1.5);
  EXPECT_NEAR(s.elapsed_s, 56.0, 1e-9);
  EXPECT_NEAR(s.avg_speed_m_per_min, 1.5, 1e-9);
  EXPECT_NEAR(s.avg_slip, 0.0, 1e-9);
  EXPECT_NEAR(s.avg_power_W, r.motion_power_W, 1e-9);
  EXPECT_EQ(trace.samples.back().distance_m, 1.4);
  for (const auto& smp : trace.samples) {
    EXPECT_NEAR(smp.distance_m, smp.t_s * 1.5 / 60.0, 1e-12);
  }
}

TEST(Traverse, DeterministicCsv) {
  const RobotParams r = reference_robot();
  const Course c = plain_course(1.4, 0.23, 0.05);
  const std::string a = trace_csv(simulate_traverse(r, c, kMoon, 1.5, 0.1, 7));
  const std::string b = trace_csv(simulate_traverse(r, c, kMoon, 1.5, 0.1, 7));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, trace_csv(simulate_traverse(r, c, kMoon, 1.5, 0.1, 8)));
  EXPECT_EQ(a.substr(0, a.find('\n')), "t_s,set_speed_mps,actual_speed_mps,slip,power_w,distance_m");
}

TEST(Traverse, TraceConsistency) {
  const RobotParams r = reference_robot();
  const auto trace = simulate_traverse(r, plain_course(1.4, 0.3, 0.1), kMoon, 1.5, 0.1, 3);
  const double set = 1.5 / 60.0;
  double energy_J = 0.0;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    EXPECT_NEAR(s.slip, 1.0 - s.actual_speed_mps / set, 1e-12);
    EXPECT_GE(s.slip, 0.0);
    EXPECT_LE(s.slip, 0.95 + 1e-12);
    if (i == 0) continue;
    const auto& p = trace.samples[i - 1];
    EXPECT_GE(s.distance_m, p.distance_m);
    EXPECT_NEAR(s.distance_m - p.distance_m, 0.5 * (s.actual_speed_mps + p.actual_speed_mps) * (s.t_s - p.t_s),
                1e-12);
    energy_J += 0.5 * (s.power_W + p.power_W) * (s.t_s - p.t_s);
  }
  const auto sum = trace_summary(trace, 1.5);
  EXPECT_DOUBLE_EQ(sum.energy_Wh, energy_J / 3600.0);
  EXPECT_NEAR(sum.avg_slip, 1.0 - sum.avg_speed_m_per_min / 1.5, 1e-15);
  EXPECT_NEAR(sum.avg_power_W * sum.elapsed_s, energy_J, 1e-9);
}

TEST(Traverse, SummaryNeedsSamples) {
  SimTrace empty;
  EXPECT_THROW(trace_summary(empty, 1.5), InvariantError);
}

TEST(Traverse, LongRunSlipConverges) {
  const RobotParams r = reference_robot();
  const double mean = 0.3, sd = 0.05;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto trace = simulate_traverse(r, plain_course(100.0, mean, sd), kMoon, 1.5, 0.1, seed);
    const auto s = trace_summary(trace, 1.5);
    const double n = static_cast<double>(trace.samples.size());
    EXPECT_NEAR(s.avg_slip, mean, 3.0 * sd / std::sqrt(n)) << "seed " << seed;
  }
}

TEST(Traverse, HigherSlipTakesLonger) {
  const RobotParams r = reference_robot();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    double prev = 0.0;
    for (double m = 0.0; m <= 0.8; m += 0.1) {
      const double t = trace_summary(simulate_traverse(r, plain_course(1.4, m, 0.05), kMoon, 1.5, 0.1, seed), 1.5)
                           .elapsed_s;
      EXPECT_GT(t, prev) << "seed " << seed << " mean " << m;
      prev = t;
    }
  }
}

TEST(Traverse, InputChecks) {
  RobotParams r = reference_robot();
  const Course c = plain_course(1.4, 0.2, 0.05);
  EXPECT_THROW(simulate_traverse(r, c, kMoon, 1.5, 0.0, 1), InvariantError);
  EXPECT_THROW(simulate_traverse(r, c, kMoon, 2.0, 0.1, 1), InvariantError);

  const Course long_course = plain_course(2.0, 0.2, 0.05);
  EXPECT_NO_THROW(simulate_traverse(r, long_course, kMoon, 1.5, 0.1, 1));
  EXPECT_THROW(simulate_traverse(r, long_course, kMoon, 1.5, 0.1, 1, SlipModel::measured(), {true}),
               InvariantError);

  r.v_max_mps = 1.0;
  EXPECT_NO_THROW(simulate_traverse(r, c, kMoon, 12.0, 0.1, 1));
  EXPECT_THROW(simulate_traverse(r, c, kMoon, 12.0, 0.1, 1, SlipModel::measured(), {true}), InvariantError);

  Course bad_slope = c;
  bad_slope.slope_start_m = 1.0;
  bad_slope.slope_length_m = 0.5;
  EXPECT_THROW(simulate_traverse(r, bad_slope, kMoon, 1.5, 0.1, 1), InvariantError);
}

TEST(Traverse, SlipModelLookup) {
  const SlipModel m = SlipModel::measured();
  TerrainSpec sand{"sand", 0.6, 0.15, 0.0, 0.01, 0.5, 0.05};
  EXPECT_EQ(m.slip_mean(sand, kMoon, false), 0.23);
  EXPECT_EQ(m.slip_mean(sand, kMoon, true), 0.47);
  EXPECT_EQ(m.slip_mean(sand, {"mars", 3.71}, false), 0.07);
  EXPECT_EQ(m.slip_mean(sand, {"mars", 3.71}, true), 0.07);
  EXPECT_EQ(m.slip_mean(sand, {"earth", 9.81}, false), 0.5);
}

TEST(Traverse, BatchSerialMatchesParallel) {
  const RobotParams r = reference_robot();
  const Course c = plain_course(1.4, 0.23, 0.05);
  const SlipModel model = SlipModel::measured();
  const TraverseBatch batch{&r, &c, &kMoon, &model, 1.5, 0.1, 100, 64};
  const auto a = run_traverse_batch_serial(batch);
  const auto b = run_traverse_batch_parallel(batch);
  ASSERT_EQ(a.size(), 64u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same(a[i], b[i])) << i;
  EXPECT_TRUE(same(a[5], trace_summary(simulate_traverse(r, c, kMoon, 1.5, 0.1, 105, model), 1.5)));

  const TraverseBatch bad{&r, &c, &kMoon, &model, 1.5, -1.0, 100, 4};
  EXPECT_THROW(run_traverse_batch_parallel(bad), InvariantError);
}

TEST(Traverse, SummarizeUsesSampleDeviation) {
  std::vector<TraverseSummary> runs(2);
  runs[0].elapsed_s = 1.0;
  runs[1].elapsed_s = 3.0;
  const auto st = summarize(runs);
  EXPECT_EQ(st.elapsed_s.mean, 2.0);
  EXPECT_NEAR(st.elapsed_s.sd, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(summarize({}).runs, 0u);
}

TEST(Replicate, LunarSand) {
  const auto rep = replicate_experiment("lunar-sand", reference_robot());
  EXPECT_EQ(rep.runs, 100u);
  EXPECT_GE(rep.stats.elapsed_s.mean, 69.0);
  EXPECT_LE(rep.stats.elapsed_s.mean, 78.0);
  EXPECT_NEAR(rep.stats.elapsed_s.mean, 72.727, 4.0);
  EXPECT_NEAR(rep.stats.power_W.mean, 20.0, 0.2);
  EXPECT_NEAR(rep.stats.slip.mean, 0.23, 0.01);
}

TEST(Replicate, LunarRocky) {
  const auto rep = replicate_experiment("lunar-rocky", reference_robot());
  EXPECT_NEAR(rep.stats.slip.mean, 0.29, 0.03);
  EXPECT_NEAR(rep.stats.power_W.mean, 21.4, 1.5);
  EXPECT_NEAR(rep.stats.speed_m_per_min.mean, 1.065, 0.01);
  for (const auto& c : rep.comparisons) {
    if (c.relative_error && (c.quantity == "slip" || c.quantity.starts_with("average power"))) {
      EXPECT_LT(std::abs(*c.relative_error), 0.10) << c.quantity;
    }
  }
  EXPECT_TRUE(rep.flags.empty());
}

TEST(Replicate, MarsSandIsFlagged) {
  const auto rep = replicate_experiment("mars-sand", reference_robot());
  EXPECT_NEAR(rep.stats.speed_m_per_min.mean, 1.395, 0.01);
  ASSERT_FALSE(rep.flags.empty());
  EXPECT_NE(rep.flags[0].find("11.3%"), std::string::npos) << rep.flags[0];
}

TEST(Replicate, SevenMillimetreGrousers) {
  const auto rep = replicate_experiment("lunar-sand-7mm", reference_robot());
  EXPECT_NEAR(rep.stats.slip.mean, 0.15, 0.015);
  EXPECT_NEAR(rep.stats.power_W.mean, 20.6, 2.06);
}

TEST(Replicate, SlopeCourseAndFlags) {
  const auto& fx = find_experiment("lunar-sand-slope10");
  EXPECT_NEAR(expected_course_slip(fx, SlipModel::measured()), 0.434765, 1e-6);
  const auto rep = replicate_experiment("lunar-sand-slope10", reference_robot());
  EXPECT_NEAR(rep.stats.speed_m_per_min.mean, 0.84785, 0.0085);
  EXPECT_NEAR(rep.stats.power_W.mean, 22.3, 0.1);
  EXPECT_EQ(rep.flags.size(), 2u);
}

TEST(Replicate, CalibratedPowerFormula) {
  const auto& fx = find_experiment("lunar-sand");
  const RobotParams r = reference_robot();
  const double p = calibrated_motion_power(fx, r, SlipModel::measured());
  EXPECT_NEAR(r.standby_power_W + (p - r.standby_power_W) * (1.0 + 0.3 * 0.23), 20.0, 1e-12);
}

TEST(Replicate, SerialAndParallelAgree) {
  ReplicateOptions serial;
  serial.parallel = false;
  const auto a = replicate_experiment("lunar-rocky", reference_robot(), serial);
  const auto b = replicate_experiment("lunar-rocky", reference_robot());
  EXPECT_EQ(a.stats.elapsed_s.mean, b.stats.elapsed_s.mean);
  EXPECT_EQ(a.stats.power_W.sd, b.stats.power_W.sd);
}

TEST(Replicate, UnknownExperiment) {
  EXPECT_THROW(replicate_experiment("venus-lava", reference_robot()), InvariantError);
}
