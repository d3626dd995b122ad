#include <benchmark/benchmark.h>

#include "tact/analytic.hpp"
#include "tact/linearized.hpp"
#include "tact/optimize.hpp"

using namespace tact;

static void BM_Xi2Min(benchmark::State& state) {
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::xi2_min(0.01, 1000, 0.9, 0.2, t));
    t += 1e-9;
  }
}
BENCHMARK(BM_Xi2Min);

static void BM_OptimalTheta(benchmark::State& state) {
  const auto alpha = SqueezeRatio::finite(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(optimize::optimal_theta(alpha, 1.0));
}
BENCHMARK(BM_OptimalTheta)->Arg(2)->Arg(10)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_OptimalU(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimize::optimal_u(50.0));
}
BENCHMARK(BM_OptimalU)->Unit(benchmark::kMicrosecond);

static void BM_OptimalSplit(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize::optimal_split_full(0.5, 100, 1.0, 0.25, 10.0, {grid, 1e-10}));
  }
}
BENCHMARK(BM_OptimalSplit)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_BogoliubovPropagate(benchmark::State& state) {
  const auto start = linearized::vacuum(1.3, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(linearized::bogoliubov_propagate(start, 0.7));
}
BENCHMARK(BM_BogoliubovPropagate);
