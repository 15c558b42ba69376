#include <benchmark/benchmark.h>

#include "ellgd/gd_solver.hpp"
#include "ellgd/sgd_solver.hpp"
#include "ellgd/verify.hpp"

using namespace ellgd;

static void SolveLogBarrier(benchmark::State& state) {
  const Problem p = builtin("log_barrier");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p, {1e-7}, cfg));
  }
}
BENCHMARK(SolveLogBarrier);

static void SolveExpSum(benchmark::State& state) {
  const Problem p = builtin("exp_sum");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p, {-5.0}, cfg));
  }
}
BENCHMARK(SolveExpSum);

static void SgdQuadraticBatch(benchmark::State& state) {
  const Problem p = builtin("quadratic", {{"L", 1.0}});
  const StochasticOracle oracle(p, 1.0, 0);
  SgdConfig cfg;
  cfg.epsilon = 0.1;
  cfg.delta = 0.2;
  cfg.T = 50;
  cfg.sigma = 1.0;
  cfg.batch_override = state.range(0);
  cfg.surrogate_stop = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgd_solve(oracle, {1.0}, cfg));
  }
}
BENCHMARK(SgdQuadraticBatch)->Arg(16)->Arg(256)->Arg(4096);

static void GradientDeviationSampler(benchmark::State& state) {
  const Problem p = builtin("log_barrier");
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_gradient_deviation(p, state.range(0), 7));
  }
}
BENCHMARK(GradientDeviationSampler)->Arg(10)->Arg(100);
