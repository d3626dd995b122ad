#include <benchmark/benchmark.h>

#include "tact/exact.hpp"

using namespace tact::exact;

static void BM_ApplyLindbladian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rho = build_initial_state(n, 0.9);
  const Superoperator gens[] = {Superoperator::squeeze(n, 0.3), Superoperator::depolarize(n, 0.1)};
  for (auto _ : state) benchmark::DoNotOptimize(apply_sum(gens, rho.entries()));
}
BENCHMARK(BM_ApplyLindbladian)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

static void BM_Evolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rho = build_initial_state(n, 1.0);
  const double j = 1.25 / n;  // alpha = 5 at Gamma = 0.25
  const Superoperator gens[] = {Superoperator::squeeze(n, j), Superoperator::depolarize(n, 0.25)};
  StepControl control;
  control.tolerance = 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho, gens, 0.25, control));
}
BENCHMARK(BM_Evolve)->DenseRange(4, 8)->Unit(benchmark::kMillisecond);

static void BM_TraceNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rho = build_initial_state(n, 0.7).entries() - maximally_mixed(n).entries();
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(rho));
}
BENCHMARK(BM_TraceNorm)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
