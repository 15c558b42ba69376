#include "ellgd/ell_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ellgd/errors.hpp"

namespace ellgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

void require_nonneg(double v, const char* name) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be non-negative and finite");
  }
}

// s = 0 plus 1023 log-spaced points on [1e-9, 1e6].
std::vector<double> check_grid() {
  std::vector<double> grid;
  grid.reserve(1024);
  grid.push_back(0.0);
  const double lo = std::log(1e-9);
  const double hi = std::log(1e6);
  for (int i = 0; i < 1023; ++i) {
    grid.push_back(std::exp(lo + (hi - lo) * i / 1022.0));
  }
  return grid;
}

}  // namespace

EllModel EllModel::constant(double L) {
  require_positive(L, "L");
  EllModel m;
  m.family_ = EllFamily::Constant;
  m.l0_ = L;
  return m;
}

EllModel EllModel::affine(double L0, double L1) {
  require_positive(L0, "L0");
  require_nonneg(L1, "L1");
  EllModel m;
  m.family_ = EllFamily::Affine;
  m.l0_ = L0;
  m.l1_ = L1;
  return m;
}

EllModel EllModel::power(double rho, double L0, double L1) {
  require_positive(L0, "L0");
  require_nonneg(L1, "L1");
  require_nonneg(rho, "rho");
  EllModel m;
  m.family_ = EllFamily::Power;
  m.l0_ = L0;
  m.l1_ = L1;
  m.rho_ = rho;
  return m;
}

EllModel EllModel::exp_growth(double L0, double L1) {
  require_positive(L0, "L0");
  require_nonneg(L1, "L1");
  EllModel m;
  m.family_ = EllFamily::ExpGrowth;
  m.l0_ = L0;
  m.l1_ = L1;
  return m;
}

EllModel EllModel::custom(std::function<double(double)> fn,
                          std::optional<double> explicit_ratio) {
  if (!fn) throw std::invalid_argument("custom ell callable is empty");
  if (explicit_ratio && !(*explicit_ratio >= 0.0)) {
    throw std::invalid_argument("explicit_ratio must be >= 0 or +infinity");
  }
  EllModel m;
  m.family_ = EllFamily::Custom;
  m.fn_ = std::move(fn);
  m.explicit_ratio_ = explicit_ratio;

  const std::vector<double> grid = check_grid();
  double prev = -kInf;
  double prev_psi2 = -kInf;
  bool psi2_monotone = true;
  for (double s : grid) {
    const double v = m.fn_(s);
    if (!(v > 0.0) || std::isnan(v)) {
      throw std::invalid_argument("custom ell is not positive on the check grid");
    }
    if (v < prev * (1.0 - 1e-12)) {
      throw std::invalid_argument("custom ell is not non-decreasing on the check grid");
    }
    prev = std::max(prev, v);
    const double twol = m.fn_(2.0 * s);
    const double psi2 = twol > 0.0 ? s * s / twol : kInf;
    if (psi2 <= prev_psi2 && s > 0.0) psi2_monotone = false;
    prev_psi2 = std::max(prev_psi2, psi2);
  }
  m.custom_psi2_monotone_ = psi2_monotone;
  return m;
}

double EllModel::operator()(double s) const {
  if (std::isnan(s) || s < 0.0) {
    throw std::domain_error("ell evaluated at negative or non-finite argument");
  }
  switch (family_) {
    case EllFamily::Constant:
      return l0_;
    case EllFamily::Affine:
      return l0_ + l1_ * s;
    case EllFamily::Power:
      if (rho_ == 2.0) return l0_ + l1_ * s * s;
      if (rho_ == 1.0) return l0_ + l1_ * s;
      return l0_ + l1_ * std::pow(s, rho_);
    case EllFamily::ExpGrowth:
      if (l1_ == 0.0) return l0_;
      if (s > 700.0) return kInf;  // e^s overflows anyway
      return l0_ + l1_ * s * s * std::exp(s);
    case EllFamily::Custom:
      return fn_(s);
  }
  return l0_;
}

double EllModel::doubling_ratio() const {
  switch (family_) {
    case EllFamily::Constant:
      return 1.0;
    case EllFamily::Affine:
      return l1_ > 0.0 ? 2.0 : 1.0;
    case EllFamily::Power:
      return (l1_ > 0.0 && rho_ > 0.0) ? std::pow(2.0, rho_) : 1.0;
    case EllFamily::ExpGrowth:
      return l1_ > 0.0 ? kInf : 1.0;
    case EllFamily::Custom:
      if (explicit_ratio_) return *explicit_ratio_;
      throw RatioUnavailableError(
          "doubling ratio unavailable: custom model was constructed without "
          "explicit_ratio (a numeric sup over an unbounded domain is "
          "unreliable)");
  }
  return 1.0;
}

double EllModel::psi2(double x) const {
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error("psi2 evaluated at negative or non-finite argument");
  }
  if (x == 0.0) return 0.0;
  const double denom = (*this)(2.0 * x);
  if (std::isinf(denom)) return 0.0;
  return x * x / denom;
}

bool EllModel::psi2_strictly_increasing() const {
  switch (family_) {
    case EllFamily::Constant:
    case EllFamily::Affine:
      return true;
    case EllFamily::Power:
      // x^2/(L0 + L1 2^rho x^rho): increasing to infinity for rho < 2,
      // increasing to the finite sup 1/(4 L1) for rho = 2.
      return l1_ == 0.0 || rho_ <= 2.0;
    case EllFamily::ExpGrowth:
      return l1_ == 0.0;
    case EllFamily::Custom:
      return custom_psi2_monotone_;
  }
  return false;
}

double EllModel::psi2_sup() const {
  if (psi2_strictly_increasing()) {
    if (family_ == EllFamily::Power && rho_ == 2.0 && l1_ > 0.0) {
      return 1.0 / (4.0 * l1_);
    }
    if (family_ == EllFamily::Custom) {
      // Unknown in general; the inverse falls back to bracket expansion.
      return kInf;
    }
    return kInf;
  }
  double best = 0.0;
  for (double s : check_grid()) best = std::max(best, psi2(s));
  return best;
}

double EllModel::psi2_inverse(double y) const {
  if (std::isnan(y) || y < 0.0) {
    throw std::domain_error("psi2_inverse evaluated at negative or non-finite argument");
  }
  if (!psi2_strictly_increasing()) {
    throw NotInvertibleError("psi2 is not strictly increasing for this model");
  }
  if (y == 0.0) return 0.0;
  const double sup = psi2_sup();
  if (y >= sup) {
    throw OutOfImageError("psi2_inverse: value at or above sup psi2");
  }

  double hi = 1.0;
  int doublings = 0;
  while (psi2(hi) < y) {
    hi *= 2.0;
    if (++doublings > 1100) {
      throw OutOfImageError("psi2_inverse: bracket expansion exhausted");
    }
  }
  double lo = (hi == 1.0) ? 0.0 : hi * 0.5;

  const double rtol = 1e-10;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    x = 0.5 * (lo + hi);
    const double v = psi2(x);
    if (std::abs(v - y) <= rtol * y) return x;
    if (v < y) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  return x;
}

std::string EllModel::to_json_string() const {
  nlohmann::json j;
  switch (family_) {
    case EllFamily::Constant:
      j = {{"family", "constant"}, {"L", l0_}};
      break;
    case EllFamily::Affine:
      j = {{"family", "affine"}, {"L0", l0_}, {"L1", l1_}};
      break;
    case EllFamily::Power:
      j = {{"family", "power"}, {"rho", rho_}, {"L0", l0_}, {"L1", l1_}};
      break;
    case EllFamily::ExpGrowth:
      j = {{"family", "exp_growth"}, {"L0", l0_}, {"L1", l1_}};
      break;
    case EllFamily::Custom:
      throw std::invalid_argument("custom ell models cannot be serialized");
  }
  return j.dump();
}

EllModel EllModel::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid ell descriptor: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family")) {
    throw std::invalid_argument("ell descriptor must be an object with a \"family\" key");
  }
  const std::string fam = j.at("family").get<std::string>();
  try {
    if (fam == "constant") return constant(j.at("L").get<double>());
    if (fam == "affine") {
      return affine(j.at("L0").get<double>(), j.at("L1").get<double>());
    }
    if (fam == "power") {
      return power(j.at("rho").get<double>(), j.at("L0").get<double>(),
                   j.at("L1").get<double>());
    }
    if (fam == "exp_growth") {
      return exp_growth(j.at("L0").get<double>(), j.at("L1").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid ell descriptor: ") + e.what());
  }
  throw std::invalid_argument("unknown ell family: " + fam);
}

}  // namespace ellgd
