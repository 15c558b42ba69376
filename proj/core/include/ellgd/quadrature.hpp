#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ellgd/errors.hpp"

namespace ellgd {

struct QuadratureControl {
  double rtol = 1e-10;
  int max_depth = 50;
};

struct QuadratureOutcome {
  double value = 0.0;
  bool converged = true;
};

namespace detail {

inline constexpr double kTinyScale = 1e-300;

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm,
                       double fb, double whole, double eps, int depth,
                       int max_depth, bool& converged) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw std::domain_error("adaptive_simpson: integrand not finite");
  }
  const double h = b - a;
  const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps || depth >= max_depth) {
    if (std::abs(delta) > 15.0 * eps) converged = false;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1,
                         max_depth, converged) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1,
                         max_depth, converged);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to relative tolerance
/// ctl.rtol. The absolute budget is seeded from a coarse estimate and the
/// run is repeated when that estimate turns out to be off scale, so the
/// relative target holds even when the initial Simpson panel is far from
/// the true value (sharply peaked integrands on long intervals).
template <class F>
QuadratureOutcome adaptive_simpson_outcome(F&& f, double a, double b,
                                           QuadratureControl ctl = {}) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::domain_error("adaptive_simpson: non-finite interval");
  }
  if (a == b) return {0.0, true};
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!(std::isfinite(fa) && std::isfinite(fm) && std::isfinite(fb))) {
    throw std::domain_error("adaptive_simpson: integrand not finite");
  }
  const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);

  double scale = std::abs(whole);
  QuadratureOutcome out{whole, true};
  for (int pass = 0; pass < 4; ++pass) {
    bool converged = true;
    const double eps = ctl.rtol * std::max(scale, detail::kTinyScale);
    const double value = detail::simpson_recurse(
        f, a, b, fa, fm, fb, whole, eps, 0, ctl.max_depth, converged);
    out = {value, converged};
    const double mag = std::abs(value);
    if (mag <= 2.0 * scale && 2.0 * mag >= scale) break;  // scale settled
    scale = mag;
  }
  return out;
}

/// Same as adaptive_simpson_outcome but throws QuadratureError (carrying the
/// best estimate) if the depth budget was exhausted before the tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, QuadratureControl ctl = {}) {
  const QuadratureOutcome out =
      adaptive_simpson_outcome(std::forward<F>(f), a, b, ctl);
  if (!out.converged) {
    throw QuadratureError("adaptive_simpson: tolerance not met at max depth",
                          out.value);
  }
  return out.value;
}

}  // namespace ellgd
