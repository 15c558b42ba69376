#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellgd/ell_model.hpp"

namespace ellgd {

enum class Setting { Nonconvex, Convex, SgdNonconvex };

struct RateQuery {
  Setting setting = Setting::Nonconvex;
  EllModel model = EllModel::constant(1.0);
  std::optional<double> Delta;  // f(x0) - f*
  std::optional<double> R;      // ||x0 - x*||
  std::optional<double> M;      // uniform gradient bound
  std::optional<double> M0;     // ||grad f(x0)||
  double epsilon = 1e-2;
  std::optional<double> sigma;  // SGD only
  std::optional<double> delta;  // SGD failure probability
};

/// One branch of a rate formula. `explicit_constants` marks branches whose
/// constants are pinned (safe to compare against experiments); branches
/// stated only up to universal constants are reported with constant 1 and
/// left out of such comparisons.
struct RateTerm {
  std::string name;
  double value = 0.0;
  bool explicit_constants = true;
};

struct RateReport {
  std::string formula_id;
  /// Iteration bound: the formula value (nonconvex/SGD) or the minimum
  /// over applicable branches (convex). Real-valued; callers ceil when
  /// budgeting.
  double iterations = 0.0;
  /// Tightest bound using only explicit-constant branches (+infinity when
  /// none applies).
  double explicit_iterations = 0.0;
  std::vector<RateTerm> terms;
  std::vector<std::string> applicability_notes;
  // SGD only
  std::optional<double> batch;
  std::optional<double> total;  // batch * iterations

  std::string to_json_string() const;
};

/// Iterations to reach ||grad f||^2 <= epsilon. Requires Delta; requires M
/// for Power with rho > 2 and for ExpGrowth. Custom models with strictly
/// increasing psi2 use the generic inversion T = 8 Delta / psi2(sqrt(eps)).
RateReport nonconvex_rate(const RateQuery& q);

/// Iterations to reach f - f* <= epsilon; minimum over the applicable
/// branches, each itemized. Requires R; branches additionally needing
/// Delta or M0 are skipped with a note when those are absent.
RateReport convex_rate(const RateQuery& q);

/// Stochastic instantiation: T = (45 r / 4) * nonconvex T, batch size from
/// batch_size(), total = B * T. Supported for Constant, Affine and Power
/// with rho <= 2 (finite ratio r <= 4).
RateReport sgd_rate(const RateQuery& q);

}  // namespace ellgd
