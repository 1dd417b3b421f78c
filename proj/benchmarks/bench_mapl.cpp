#include <benchmark/benchmark.h>

#include "mapl/exact_eval.hpp"
#include "mapl/likelihood.hpp"
#include "mapl/mc_oracle.hpp"

namespace {

const mapl::ScenarioParams kParams{33, 22, 0.8, 0.05, 2.0};

void BM_h(benchmark::State& state) {
  double delta = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapl::h(delta, 0.7, 1.1, kParams));
    delta = delta > 2.0 ? -2.0 : delta + 1e-3;
  }
}
BENCHMARK(BM_h);

void BM_solve_delta(benchmark::State& state) {
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapl::solve_delta(0.975, x, 1.1, kParams));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_solve_delta);

void BM_evaluate_point(benchmark::State& state) {
  mapl::QuadratureConfig q;
  q.x_nodes = static_cast<int>(state.range(0));
  q.y_nodes = static_cast<int>(state.range(1));
  q.estimate_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(mapl::evaluate_point(1.0, kParams, q));
}
BENCHMARK(BM_evaluate_point)->Args({80, 60})->Args({200, 120})->Unit(benchmark::kMillisecond);

void BM_simulate_mpi(benchmark::State& state) {
  mapl::SimConfig c;
  c.params = kParams;
  c.gamma = 1.0;
  c.replicates = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(mapl::simulate_mpi(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_mpi)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
