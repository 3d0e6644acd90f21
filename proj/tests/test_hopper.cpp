#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sphere/hopper.hpp"
#include "support.hpp"

using namespace sphere;

namespace {

const GravityEnvironment kEarth{"earth", 9.81};
const GravityEnvironment kMars{"mars", 3.71};
const GravityEnvironment kMoon{"moon", 1.62};

// E s b t^3 / L^3 = 160 N for this spring, so F = 160 R.
SpringSpec unit_spring() { return {200e9, 0.05, 0.01, 0.01, 0.001, std::nullopt}; }

}  // namespace

TEST(Hopper, HopEnergy) {
  EXPECT_NEAR(hop_energy(2.0, kEarth, 0.20), 3.924, 1e-12);
  EXPECT_EQ(hop_energy(2.0, kEarth, 0.0), 0.0);
  EXPECT_NEAR(hop_energy(2.0, kMars, 0.10), 0.742, 1e-12);
}

TEST(Hopper, SpringConstant) {
  EXPECT_NEAR(required_spring_constant(3.924, 0.43898), 40.72, 0.01);
  EXPECT_NEAR(required_spring_constant(3.924, deg_to_rad(25.15)), 40.7313, 1e-4);
  EXPECT_NEAR(required_spring_constant(3.924, 0.439), 40.7, 0.1);
  EXPECT_EQ(required_spring_constant(0.0, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(required_spring_constant(3.0, 0.8), required_spring_constant(3.0, 0.4) / 4.0);
  EXPECT_THROW(required_spring_constant(3.0, 0.0), InvariantError);
}

TEST(Hopper, SpringLoads) {
  auto l = spring_loads(40.72, 0.43898, 0.05);
  EXPECT_NEAR(l.torque_Nm, 17.875, 1e-3);
  EXPECT_NEAR(l.force_N, 357.5, 0.05);
  l = spring_loads(71.0, 0.43898, 0.05);
  EXPECT_NEAR(l.torque_Nm, 31.17, 0.005);
  EXPECT_NEAR(l.force_N, 623.4, 0.1);
  l = spring_loads(0.0, 0.43898, 0.05);
  EXPECT_EQ(l.torque_Nm, 0.0);
  EXPECT_EQ(l.force_N, 0.0);
  EXPECT_THROW(spring_loads(40.0, 0.4, 0.0), InvariantError);
}

TEST(Hopper, SpringCountEqualLengths) {
  auto n = spring_count(5.2 * 160.0, unit_spring());
  EXPECT_NEAR(n.continuous, 5.2, 1e-12);
  EXPECT_EQ(n.count, 6);
  EXPECT_EQ(n.psi, 1.0);

  n = spring_count(160.0, unit_spring());
  EXPECT_EQ(n.count, 1);
}

TEST(Hopper, SpringCountPsiIsOneWhenPrimeMatches) {
  SpringSpec s = unit_spring();
  s.equal_length_count = 4;
  const auto n = spring_count(4.0 * 160.0, s);
  EXPECT_NEAR(n.continuous, 4.0, 1e-9);
  EXPECT_NEAR(n.psi, 1.0, 1e-9);
  EXPECT_EQ(n.count, 4);
}

TEST(Hopper, SpringCountRejectsPrimeAboveRoot) {
  SpringSpec s = unit_spring();
  s.equal_length_count = 6;
  EXPECT_THROW(spring_count(1.5 * 160.0, s), InvariantError);
  s.equal_length_count = 7;
  EXPECT_THROW(spring_count(2.0 * 160.0, s), InvariantError);
  EXPECT_THROW(spring_count(0.0, unit_spring()), InvariantError);
}

TEST(Hopper, FixedPointAgreesWithClosedForm) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    SpringSpec s = unit_spring();
    s.length_m = test::uniform(rng, 0.03, 0.1);
    s.thickness_m = test::uniform(rng, 0.0005, 0.002);
    const double base = s.youngs_modulus_Pa * s.max_deflection_m * s.width_m * std::pow(s.thickness_m, 3) /
                        std::pow(s.length_m, 3);
    const double ratio = test::uniform(rng, 0.5, 40.0);
    const int n_prime_max = static_cast<int>(std::ceil(3.0 * ratio)) - 1;
    if (n_prime_max < 1) continue;
    s.equal_length_count = std::uniform_int_distribution<int>(1, n_prime_max)(rng);
    const auto n = spring_count(ratio * base, s);
    const double closed = (3.0 * ratio - *s.equal_length_count) / 2.0;
    EXPECT_NEAR(n.continuous, closed, 1e-8 * std::max(1.0, closed));
    EXPECT_LT(n.iterations, 100);
  }
}

TEST(Hopper, SpringCountMonotone) {
  const SpringSpec s = unit_spring();
  const double f = 700.0;
  const int base = spring_count(f, s).count;
  EXPECT_GE(spring_count(f * 1.5, s).count, base);
  SpringSpec t = s;
  t.length_m *= 1.2;
  EXPECT_GE(spring_count(f, t).count, base);
  t = s;
  t.youngs_modulus_Pa *= 1.5;
  EXPECT_LE(spring_count(f, t).count, base);
  t = s;
  t.width_m *= 1.5;
  EXPECT_LE(spring_count(f, t).count, base);
  t = s;
  t.thickness_m *= 1.2;
  EXPECT_LE(spring_count(f, t).count, base);
  t = s;
  t.max_deflection_m *= 1.5;
  EXPECT_LE(spring_count(f, t).count, base);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const double f1 = test::uniform(rng, 10, 5000);
    const double f2 = f1 * test::uniform(rng, 1.0, 3.0);
    EXPECT_LE(spring_count(f1, s).count, spring_count(f2, s).count);
  }
}

TEST(Hopper, ExampleConfigNeedsSixSprings) {
  const Config c = load_config(test::example_config());
  const HopperDesign d = design_hopper(c.robot, kEarth, c.hopper.spring);
  EXPECT_NEAR(d.stored_energy_J, 3.924, 1e-12);
  EXPECT_NEAR(d.spring_constant_Nm_per_rad, 40.7313, 1e-4);
  EXPECT_NEAR(d.spring_torque_Nm, 17.879, 1e-3);
  EXPECT_NEAR(d.spring_force_N, 357.58, 1e-2);
  EXPECT_EQ(d.spring_count, 6);
  EXPECT_EQ(d.psi, 1.0);
}

TEST(Hopper, DesignEnergyIdentity) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const RobotParams r = test::random_robot(rng);
    const GravityEnvironment env{"x", test::uniform(rng, 0.5, 25.0)};
    const HopperDesign d = design_hopper(r, env, unit_spring());
    const double stored = 0.5 * d.spring_constant_Nm_per_rad * d.cam_angle_rad * d.cam_angle_rad;
    const double target = r.mass_kg * env.g * r.design_hop_height_m;
    EXPECT_NEAR(stored / target, 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(d.spring_torque_Nm, d.spring_constant_Nm_per_rad * d.cam_angle_rad);
    EXPECT_DOUBLE_EQ(d.spring_force_N, d.spring_torque_Nm / unit_spring().length_m);
    EXPECT_GE(d.spring_count, 1);
  }
}

TEST(Hopper, GravityScaling) {
  EXPECT_NEAR(scale_hop_height(0.08, kMars, kMoon), 0.183210, 1e-6);
  EXPECT_EQ(scale_hop_height(0.08, kMars, kMars), 0.08);
  EXPECT_NEAR(scale_hop_height(0.20, kEarth, kMars), 0.528841, 1e-6);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const GravityEnvironment a{"a", test::uniform(rng, 0.1, 30)};
    const GravityEnvironment b{"b", test::uniform(rng, 0.1, 30)};
    const double h = test::uniform(rng, 0.01, 2);
    EXPECT_NEAR(scale_hop_height(h, a, b) * b.g, h * a.g, 1e-12 * h * a.g);
  }
}

TEST(Hopper, VerticalHopOnMars) {
  const auto tr = simulate_hop(0.742, 2.0, kMars);
  EXPECT_NEAR(tr.launch_speed_mps, 0.861394, 1e-6);
  EXPECT_NEAR(tr.apex_height_m, 0.100, 1e-4);
  EXPECT_NEAR(tr.flight_time_s, 0.464363, 1e-6);
  EXPECT_EQ(tr.samples.back().height_m, 0.0);
  for (const auto& s : tr.samples) EXPECT_GE(s.height_m, 0.0);
}

TEST(Hopper, EfficiencyScalesApex) {
  const double full = simulate_hop(0.742, 2.0, kMars).apex_height_m;
  for (double lambda : {0.1, 0.23, 0.5, 0.9}) {
    const double part = simulate_hop(0.742, 2.0, kMars, {.efficiency = lambda}).apex_height_m;
    EXPECT_NEAR(part, lambda * full, 2e-4 * full);
  }
  const auto cal = simulate_hop(3.924, 2.0, kMars, {.efficiency = 0.30});
  EXPECT_NEAR(cal.apex_height_m, 0.159, 0.001);
  EXPECT_GE(cal.apex_height_m, 0.08);
  EXPECT_LE(cal.apex_height_m, 0.16);
}

TEST(Hopper, BallisticConservationAndApex) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const double energy = test::uniform(rng, 0.05, 10.0);
    const double mass = test::uniform(rng, 0.2, 5.0);
    const GravityEnvironment env{"x", test::uniform(rng, 0.5, 12.0)};
    const double alpha = test::uniform(rng, 0.2, std::numbers::pi - 0.2);
    const HopOptions opts{alpha, 1.0, 1e-4};
    const auto tr = simulate_hop(energy, mass, env, opts);
    const double v = tr.launch_speed_mps;
    const double vx = v * std::cos(alpha);
    const double analytic = std::pow(v * std::sin(alpha), 2) / (2.0 * env.g);
    EXPECT_LE(std::abs(tr.apex_height_m - analytic), opts.dt_s * v);
    for (const auto& s : tr.samples) {
      const double e = 0.5 * mass * (vx * vx + s.vertical_velocity_mps * s.vertical_velocity_mps) +
                       mass * env.g * s.height_m;
      ASSERT_NEAR(e / energy, 1.0, 1e-6);
    }
  }
}

TEST(Hopper, SimulationRejectsBadInputs) {
  EXPECT_THROW(simulate_hop(1.0, 0.0, kMars), InvariantError);
  EXPECT_THROW(simulate_hop(1.0, 1.0, kMars, {.efficiency = 0.0}), InvariantError);
  EXPECT_THROW(simulate_hop(1.0, 1.0, kMars, {.dt_s = 0.0}), InvariantError);
}
