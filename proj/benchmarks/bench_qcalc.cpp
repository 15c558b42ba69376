#include <benchmark/benchmark.h>

#include "ellgd/qcalc.hpp"

using namespace ellgd;

static void StepSizeConstant(benchmark::State& state) {
  const QEvaluator ev(EllModel::constant(4.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.optimal_step(123.0));
  }
}
BENCHMARK(StepSizeConstant);

static void StepSizeAffine(benchmark::State& state) {
  const QEvaluator ev(EllModel::affine(3.3, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.optimal_step(17.0));
  }
}
BENCHMARK(StepSizeAffine);

static void StepSizePowerQuadrature(benchmark::State& state) {
  const QEvaluator ev(EllModel::power(2.0, 800.0, 2.0));
  const double g = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.optimal_step(g));
  }
}
BENCHMARK(StepSizePowerQuadrature)->DenseRange(0, 6, 2);

static void QInversePower(benchmark::State& state) {
  const QEvaluator ev(EllModel::power(2.0, 800.0, 2.0));
  const double qm = ev.q_max(10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.q_inverse(0.5 * qm, 10.0));
  }
}
BENCHMARK(QInversePower);

static void QMaxExpGrowth(benchmark::State& state) {
  const QEvaluator ev(EllModel::exp_growth(1.0, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.q_max(0.3));
  }
}
BENCHMARK(QMaxExpGrowth);
