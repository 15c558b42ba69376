#pragma once

#include <cmath>
#include <vector>

#include "ellgd/ell_model.hpp"
#include "ellgd/rng.hpp"

namespace ellgd::testsupport {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Random model from the four closed families, parameters log-uniform.
/// ExpGrowth gets index 3 so callers can skip it where the ratio must be
/// finite.
inline EllModel random_model(CounterRng& rng, bool allow_exp_growth = true) {
  const int n_families = allow_exp_growth ? 4 : 3;
  const int pick = static_cast<int>(rng.next_u64() % n_families);
  const double L0 = std::exp(rng.next_in(std::log(1e-2), std::log(1e3)));
  const double L1 = std::exp(rng.next_in(std::log(1e-3), std::log(1e2)));
  switch (pick) {
    case 0:
      return EllModel::constant(L0);
    case 1:
      return EllModel::affine(L0, L1);
    case 2:
      return EllModel::power(rng.next_in(0.0, 3.5), L0, L1);
    default:
      return EllModel::exp_growth(L0, L1);
  }
}

/// Trapezoid rule on n+1 equally spaced points; the brute-force quadrature
/// oracle used to cross-check closed forms.
template <class F>
double trapezoid(F&& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

}  // namespace ellgd::testsupport
