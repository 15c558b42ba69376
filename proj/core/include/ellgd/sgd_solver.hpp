#pragma once

#include <cstdint>
#include <optional>

#include "ellgd/gd_solver.hpp"
#include "ellgd/problems.hpp"

namespace ellgd {

struct SgdConfig {
  double epsilon = 1e-2;  // target for ||grad f||^2
  double delta = 0.1;     // failure probability, in (0, 1)
  long T = 1000;          // iteration budget
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<long> batch_override;
  // Stop early once ||g_k||^2 <= epsilon/4 (recorded as SurrogateStop).
  bool surrogate_stop = true;
};

/// B = max{ceil(32 (1 + sqrt(3 log(T/delta)))^2 sigma^2 / epsilon), 1}.
long batch_size(double sigma, double epsilon, long T, double delta);

/// Stochastic gradient descent with the ratio-scaled integral step
///   gamma_k = optimal_step(||g_k||) / (5 r),   r = sup ell(2s)/ell(s),
/// where g_k is the batch-mean gradient. The batch size is computed from
/// cfg unless batch_override is given. The oracle is re-seeded from
/// cfg.seed, so the trace is a deterministic function of (problem, x0,
/// cfg). Rejects models with infinite doubling ratio. Trace records carry
/// ||g_k|| in grad_norm plus batch and the exact gradient norm.
Trace sgd_solve(const StochasticOracle& oracle, const Vec& x0,
                const SgdConfig& cfg);

}  // namespace ellgd
