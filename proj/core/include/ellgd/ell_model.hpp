#pragma once

#include <functional>
#include <optional>
#include <string>

namespace ellgd {

enum class EllFamily { Constant, Affine, Power, ExpGrowth, Custom };

/// Non-decreasing positive model ell(s) bounding the Hessian norm by a
/// function of the gradient norm. Closed families:
///
///   Constant:  ell(s) = L
///   Affine:    ell(s) = L0 + L1*s
///   Power:     ell(s) = L0 + L1*s^rho
///   ExpGrowth: ell(s) = L0 + L1*s^2*e^s
///
/// Custom callables are grid-checked for positivity and monotonicity at
/// construction (log-spaced 1024-point grid on [0, 1e6]) and rejected on
/// violation. Local Lipschitz continuity of custom callables is the
/// caller's responsibility. Instances are immutable; every method is pure
/// and safe to call concurrently.
class EllModel {
 public:
  static EllModel constant(double L);
  static EllModel affine(double L0, double L1);
  static EllModel power(double rho, double L0, double L1);
  static EllModel exp_growth(double L0, double L1);
  static EllModel custom(std::function<double(double)> fn,
                         std::optional<double> explicit_ratio = std::nullopt);

  /// ell(s). Throws std::domain_error for s < 0 or non-finite s.
  double operator()(double s) const;

  /// r = sup_{s>=0} ell(2s)/ell(s). Returns +infinity for ExpGrowth and
  /// throws RatioUnavailableError for Custom models without explicit_ratio.
  double doubling_ratio() const;

  /// psi2(x) = x^2 / ell(2x).
  double psi2(double x) const;

  /// Numeric inverse of psi2, by doubling bracket expansion and bisection
  /// to relative tolerance 1e-10 in the residual. Throws
  /// NotInvertibleError when psi2 is not strictly increasing for this
  /// model and OutOfImageError when y >= sup psi2.
  double psi2_inverse(double y) const;

  bool psi2_strictly_increasing() const;

  /// sup psi2 over [0, inf) for monotone psi2 (possibly +infinity); a grid
  /// maximum otherwise.
  double psi2_sup() const;

  EllFamily family() const { return family_; }
  double L0() const { return l0_; }
  double L1() const { return l1_; }
  double rho() const { return rho_; }

  /// JSON object form, e.g. {"family":"power","rho":2.0,"L0":800.0,"L1":2.0}.
  /// Custom models are code-only and cannot be serialized.
  std::string to_json_string() const;
  static EllModel from_json_string(const std::string& text);

 private:
  EllModel() = default;

  EllFamily family_ = EllFamily::Constant;
  double l0_ = 0.0;  // holds L for Constant
  double l1_ = 0.0;
  double rho_ = 0.0;
  std::function<double(double)> fn_;
  std::optional<double> explicit_ratio_;
  bool custom_psi2_monotone_ = false;
};

}  // namespace ellgd
