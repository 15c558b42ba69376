#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellgd/gd_solver.hpp"
#include "ellgd/problems.hpp"

namespace ellgd {

/// Outcome of one sampled inequality check. Slacks are normalized by the
/// bound magnitude (slack = (bound - lhs) / (1 + |bound|)), so `tolerance`
/// is the additive-relative threshold: a sample violates when its
/// normalized slack falls below -tolerance. `errors` counts samples whose
/// numeric machinery failed (quadrature non-convergence); they are
/// reported, not counted as violations.
struct CheckReport {
  std::string check_id;
  long samples = 0;
  long violations = 0;
  long errors = 0;
  double worst_margin = 0.0;  // most negative normalized slack observed
  double tolerance = 1e-8;
};

/// Gradient-variation bound: for sampled interior pairs (x, y) with
/// ||y - x|| < 0.9 q_max(||grad f(x)||),
///   ||grad f(y) - grad f(x)|| <= q_inverse(||y - x||; ||grad f(x)||).
/// Points are drawn uniformly from the problem's sample box, inset 1e-6
/// (relative) from each face.
CheckReport check_gradient_deviation(const Problem& problem,
                                     long n_samples, std::uint64_t seed);

/// Function upper bound: f(y) <= f(x) + <grad f(x), y - x>
///   + integral_0^{||y-x||} q_inverse(tau; ||grad f(x)||) dtau,
/// the integral evaluated by adaptive quadrature over the numerically
/// inverted q.
CheckReport check_upper_bound(const Problem& problem, long n_samples,
                              std::uint64_t seed);

/// Step-size optimality at x: U(y*) <= U(y) for random y in the admissible
/// ball, where y* = x - optimal_step * grad f(x) and U is the function
/// upper bound from check_upper_bound; also U(y*) = f(x) -
/// descent_decrement. Throws when
/// grad f(x) = 0.
CheckReport check_optimality(const Problem& problem, const Vec& x,
                             long n_perturbations, std::uint64_t seed);

/// Re-walks an integral-rule trace and checks, per transition:
///   (a) per-step descent  f_{k+1} <= f_k - (gamma_k/4)||g_k||^2
///   (b) the aggregate bound  min_{k<T} g_k^2/ell(2 g_k) <= 4 Delta / T
///       for every prefix (when f_star is known)
///   (c) gradient-norm monotonicity (convex problems)
///   (d) distance halving  (convex problems with known x_star)
/// Returns one report per applicable sub-check. Throws
/// std::invalid_argument when the trace does not match the problem or was
/// not produced by the integral rule.
std::vector<CheckReport> check_trajectory(const Trace& trace,
                                          const Problem& problem);

}  // namespace ellgd
