#include "ellgd/qcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ellgd/errors.hpp"

namespace ellgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonneg_finite(double v, const char* name) {
  if (std::isnan(v) || std::isinf(v) || v < 0.0) {
    throw std::domain_error(std::string(name) + " must be non-negative and finite");
  }
}

}  // namespace

QEvaluator::QEvaluator(EllModel model, double quad_rtol, int quad_max_depth,
                       double root_rtol)
    : model_(std::move(model)),
      quad_rtol_(quad_rtol),
      quad_max_depth_(quad_max_depth),
      root_rtol_(root_rtol) {
  if (!(quad_rtol > 0.0) || !(root_rtol > 0.0) || quad_max_depth < 1) {
    throw std::invalid_argument("QEvaluator: invalid tolerance settings");
  }
}

double QEvaluator::q(double s, double a) const {
  require_nonneg_finite(s, "s");
  require_nonneg_finite(a, "a");
  if (s == 0.0) return 0.0;
  switch (model_.family()) {
    case EllFamily::Constant:
      return s / model_.L0();
    case EllFamily::Affine: {
      const double L0 = model_.L0();
      const double L1 = model_.L1();
      if (L1 == 0.0) return s / L0;
      return std::log1p(L1 * s / (L0 + L1 * a)) / L1;
    }
    default:
      break;
  }
  const auto& ell = model_;
  const auto integrand = [&](double v) { return 1.0 / ell(a + v); };
  if (s <= 4.0) return adaptive_simpson(integrand, 0.0, s, ctl());
  // The integrand is non-increasing, so dyadic panels keep every Simpson
  // call on an interval where it varies by a bounded factor; per-panel
  // relative control gives a relative bound on the (positive) total.
  double total = adaptive_simpson(integrand, 0.0, 1.0, ctl());
  double left = 1.0;
  while (left < s) {
    const double right = std::min(2.0 * left, s);
    total += adaptive_simpson(integrand, left, right, ctl());
    left = right;
  }
  return total;
}

// Tail integral_1^inf dv/(L0 + L1 (a+v)^rho) for rho > 1 via the
// substitution w = (a+v)^(1-rho), which maps the tail onto a finite
// interval with a bounded integrand.
double QEvaluator::q_max_power_tail(double a) const {
  const double rho = model_.rho();
  const double L0 = model_.L0();
  const double L1 = model_.L1();
  const double head = adaptive_simpson(
      [&](double v) { return 1.0 / model_(a + v); }, 0.0, 1.0, ctl());
  const double w1 = std::pow(a + 1.0, 1.0 - rho);
  const double expo = rho / (rho - 1.0);
  const double tail = adaptive_simpson(
      [&](double w) {
        return 1.0 / ((rho - 1.0) * (L0 * std::pow(w, expo) + L1));
      },
      0.0, w1, ctl());
  return head + tail;
}

// integral_0^inf dv/ell(a+v) compactified with v = t/(1-t). Suitable when
// the integrand decays faster than any polynomial (ExpGrowth).
double QEvaluator::q_max_compactified(double a) const {
  const auto integrand = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double v = t / (1.0 - t);
    const double L = model_(a + v);
    if (std::isinf(L)) return 0.0;
    return 1.0 / (L * (1.0 - t) * (1.0 - t));
  };
  return adaptive_simpson(integrand, 0.0, 1.0, ctl());
}

// Midpoint refinement of the compactified integral with Richardson
// extrapolation. Estimates that grow by more than 10x over four depth
// steps signal divergence (+infinity); stalls without convergence are
// reported as inconclusive rather than guessed.
double QEvaluator::q_max_custom(double a) const {
  const auto integrand = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double v = t / (1.0 - t);
    const double L = model_(a + v);
    if (std::isinf(L)) return 0.0;
    return 1.0 / (L * (1.0 - t) * (1.0 - t));
  };

  constexpr int kMaxDepth = 22;
  double estimates[kMaxDepth + 1] = {};
  double prev_mid = 0.0;
  for (int d = 2; d <= kMaxDepth; ++d) {
    const long n = 1L << d;
    const double h = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    for (long i = 0; i < n; ++i) {
      sum += integrand((static_cast<double>(i) + 0.5) * h);
    }
    const double mid = sum * h;
    estimates[d] = mid;
    if (d >= 6 && estimates[d - 4] > 0.0 && mid > 10.0 * estimates[d - 4]) {
      return kInf;
    }
    if (d >= 3) {
      const double richardson = mid + (mid - prev_mid) / 3.0;
      if (std::abs(mid - prev_mid) <=
          30.0 * quad_rtol_ * std::max(std::abs(mid), 1e-300)) {
        return richardson;
      }
    }
    prev_mid = mid;
  }
  throw InconclusiveError(
      "q_max: divergence test inconclusive for custom model; supply a "
      "closed-form family or avoid operations that need q_max");
}

double QEvaluator::q_max(double a) const {
  require_nonneg_finite(a, "a");
  switch (model_.family()) {
    case EllFamily::Constant:
      return kInf;
    case EllFamily::Affine:
      return kInf;  // log divergence
    case EllFamily::Power:
      if (model_.L1() == 0.0 || model_.rho() <= 1.0) return kInf;
      return q_max_power_tail(a);
    case EllFamily::ExpGrowth:
      if (model_.L1() == 0.0) return kInf;
      return q_max_compactified(a);
    case EllFamily::Custom:
      return q_max_custom(a);
  }
  return kInf;
}

double QEvaluator::q_inverse(double t, double a) const {
  require_nonneg_finite(t, "t");
  require_nonneg_finite(a, "a");
  if (t == 0.0) return 0.0;
  // q_max itself carries quadrature error, so targets inside its noise
  // band count as out of reach. Custom models whose divergence test is
  // inconclusive skip the pre-check; an unreachable target then surfaces
  // as bracket-expansion exhaustion below.
  try {
    const double qm = q_max(a);
    if (!(t < qm * (1.0 - 10.0 * quad_rtol_))) {
      throw BeyondQMaxError("q_inverse: value beyond q_max");
    }
  } catch (const InconclusiveError&) {
  }
  switch (model_.family()) {
    case EllFamily::Constant:
      return t * model_.L0();
    case EllFamily::Affine: {
      const double L0 = model_.L0();
      const double L1 = model_.L1();
      if (L1 == 0.0) return t * L0;
      return (L0 + L1 * a) * std::expm1(L1 * t) / L1;
    }
    default:
      break;
  }

  // q(s) <= s/ell(a), so s = t*ell(a) is at or below the root up to
  // quadrature noise.
  double lo = t * model_(a);
  double hi = lo;
  if (q(lo, a) >= t) {
    lo = 0.0;
  } else {
    int doublings = 0;
    hi = std::max(hi, 1e-300) * 2.0;
    while (q(hi, a) < t) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 1200) {
        throw BeyondQMaxError("q_inverse: bracket expansion exhausted");
      }
    }
  }

  // The residual cannot be driven below q's own quadrature error.
  const double target = std::max(root_rtol_ * std::max(t, 1e-300),
                                 8.0 * quad_rtol_ * t);
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double resid = q(s, a) - t;
    if (std::abs(resid) <= target) return s;
    if (resid < 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = s - resid * model_(a + s);  // Newton; q'(s) = 1/ell(a+s)
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s || hi - lo <= 1e-15 * hi) return s;
    s = next;
  }
  return s;
}

double QEvaluator::optimal_step(double g) const {
  require_nonneg_finite(g, "g");
  if (g == 0.0) return 1.0 / model_(0.0);  // constant integrand limit
  switch (model_.family()) {
    case EllFamily::Constant:
      return 1.0 / model_.L0();
    case EllFamily::Affine: {
      const double L0 = model_.L0();
      const double L1 = model_.L1();
      if (L1 == 0.0) return 1.0 / L0;
      return std::log1p(L1 * g / (L0 + L1 * g)) / (L1 * g);
    }
    default:
      break;
  }
  return adaptive_simpson([&](double v) { return 1.0 / model_(g + g * v); },
                          0.0, 1.0, ctl());
}

double QEvaluator::descent_decrement(double g) const {
  require_nonneg_finite(g, "g");
  if (g == 0.0) return 0.0;
  if (model_.family() == EllFamily::Constant) {
    return g * g / (2.0 * model_.L0());
  }
  const double integral = adaptive_simpson(
      [&](double v) { return (1.0 - v) / model_(g + g * v); }, 0.0, 1.0,
      ctl());
  return g * g * integral;
}

}  // namespace ellgd
