// Serial reference vs OpenMP kernels: traverse batches and tractive-force sweeps.

#include <benchmark/benchmark.h>

#include <random>

#include "sphere/drivetrain.hpp"
#include "sphere/traverse_sim.hpp"

using namespace sphere;

namespace {

struct BatchFixture {
  RobotParams robot = reference_robot();
  Course course;
  GravityEnvironment env{"moon", 1.62};
  SlipModel model = SlipModel::measured();

  BatchFixture() { course.terrain = reference_sand(); }

  TraverseBatch batch(std::size_t runs) const { return {&robot, &course, &env, &model, 1.5, 0.1, 1, runs}; }
};

std::vector<SweepPoint> sweep_points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SweepPoint> pts(n);
  for (auto& p : pts) p = {0.5 + 9.5 * u(rng), 0.5 * u(rng), 1.5 * u(rng), u(rng)};
  return pts;
}

void BM_TraverseBatchSerial(benchmark::State& state) {
  const BatchFixture f;
  const auto batch = f.batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_traverse_batch_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TraverseBatchParallel(benchmark::State& state) {
  const BatchFixture f;
  const auto batch = f.batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_traverse_batch_parallel(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto pts = sweep_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_tractive_forces_serial(reference_robot(), reference_sand(), {"paper-lunar", 1.6},
                                                          FormulaMode::Corrected, pts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto pts = sweep_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_tractive_forces_parallel(reference_robot(), reference_sand(), {"paper-lunar", 1.6},
                                                            FormulaMode::Corrected, pts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TraverseBatchSerial)->Arg(100)->Arg(1000);
BENCHMARK(BM_TraverseBatchParallel)->Arg(100)->Arg(1000);
BENCHMARK(BM_SweepSerial)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_SweepParallel)->Arg(1 << 12)->Arg(1 << 18);

BENCHMARK_MAIN();
