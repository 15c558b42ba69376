#pragma once

#include "ellgd/ell_model.hpp"
#include "ellgd/quadrature.hpp"

namespace ellgd {

/// Numeric evaluation of q(s;a) = integral_0^s dv/ell(a+v), its inverse,
/// the integral step size and the one-step decrement for a fixed model.
///
/// q(.;a) is strictly increasing with q(0;a) = 0. Constant and Affine
/// models use their closed forms (s/L and log1p/expm1); the other
/// families integrate by adaptive Simpson and invert by doubling bracket
/// expansion followed by a safeguarded Newton/bisection iteration (the
/// derivative q'(s) = 1/ell(a+s) is free). Instances are immutable and
/// safe to share across threads.
class QEvaluator {
 public:
  explicit QEvaluator(EllModel model, double quad_rtol = 1e-10,
                      int quad_max_depth = 50, double root_rtol = 1e-12);

  const EllModel& model() const { return model_; }
  double quad_rtol() const { return quad_rtol_; }
  double root_rtol() const { return root_rtol_; }

  /// q(s;a). Exactly 0 for s = 0. Throws QuadratureError on
  /// non-convergence (carrying the best estimate).
  double q(double s, double a) const;

  /// q_max(a) = integral_0^infinity dv/ell(a+v), possibly +infinity.
  /// Closed-form dispatch for the built-in families; custom models use a
  /// compactified quadrature with divergence detection and throw
  /// InconclusiveError when neither convergence nor divergence can be
  /// established.
  double q_max(double a) const;

  /// Solves q(s;a) = t for s. Exactly 0 for t = 0. Throws BeyondQMaxError
  /// when t >= q_max(a).
  double q_inverse(double t, double a) const;

  /// gamma(g) = integral_0^1 dv/ell(g + g v). Closed forms for Constant and
  /// Affine; 1/ell(0) for g = 0. Always inside [1/ell(2g), 1/ell(g)].
  double optimal_step(double g) const;

  /// g^2 * integral_0^1 (1-v)/ell(g + g v) dv, the guaranteed one-step
  /// decrease of the upper bound at the optimal step.
  double descent_decrement(double g) const;

 private:
  QuadratureControl ctl() const { return {quad_rtol_, quad_max_depth_}; }
  double q_max_power_tail(double a) const;
  double q_max_compactified(double a) const;
  double q_max_custom(double a) const;

  EllModel model_;
  double quad_rtol_;
  int quad_max_depth_;
  double root_rtol_;
};

}  // namespace ellgd
