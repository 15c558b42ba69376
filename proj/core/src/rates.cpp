#include "ellgd/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "ellgd/sgd_solver.hpp"

namespace ellgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require(const std::optional<double>& v, const char* what) {
  if (!v) {
    throw std::invalid_argument(std::string("rate query requires ") + what);
  }
  return *v;
}

void finish(RateReport& report) {
  double best = kInf;
  for (const RateTerm& t : report.terms) {
    if (t.explicit_constants) best = std::min(best, t.value);
  }
  report.explicit_iterations = best;
}

}  // namespace

std::string RateReport::to_json_string() const {
  nlohmann::json j;
  j["formula_id"] = formula_id;
  j["iterations"] = iterations;
  j["explicit_iterations"] = explicit_iterations;
  j["terms"] = nlohmann::json::array();
  for (const RateTerm& t : terms) {
    j["terms"].push_back({{"name", t.name},
                          {"value", t.value},
                          {"explicit_constants", t.explicit_constants}});
  }
  j["applicability_notes"] = applicability_notes;
  if (batch) j["batch"] = *batch;
  if (total) j["total"] = *total;
  return j.dump(2);
}

RateReport nonconvex_rate(const RateQuery& q) {
  if (!(q.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double D = require(q.Delta, "Delta");
  const double eps = q.epsilon;
  RateReport report;

  switch (q.model.family()) {
    case EllFamily::Constant: {
      const double L = q.model.L0();
      report.formula_id = "nc.L_smooth";
      report.terms.push_back({"4*L*Delta/eps", 4.0 * L * D / eps, true});
      report.iterations = report.terms[0].value;
      break;
    }
    case EllFamily::Affine:
    case EllFamily::Power: {
      const double L0 = q.model.L0();
      const double L1 = q.model.L1();
      const double rho =
          q.model.family() == EllFamily::Affine ? 1.0 : q.model.rho();
      if (rho <= 2.0) {
        report.formula_id = "nc.power_rho_le2";
        const double t1 = 8.0 * L0 * D / eps;
        const double t2 = 32.0 * L1 * D / std::pow(eps, (2.0 - rho) / 2.0);
        report.terms.push_back({"8*L0*Delta/eps", t1, true});
        report.terms.push_back({"32*L1*Delta/eps^((2-rho)/2)", t2, true});
        report.iterations = std::max(t1, t2);
      } else {
        const double M = require(q.M, "Assumption 3 bound M (rho > 2)");
        report.formula_id = "nc.power_rho_gt2";
        const double t1 = 8.0 * L0 * D / eps;
        const double t2 = 64.0 * L1 * D * std::pow(2.0 * M, rho - 2.0);
        report.terms.push_back({"8*L0*Delta/eps", t1, true});
        report.terms.push_back({"64*L1*Delta*(2M)^(rho-2)", t2, true});
        report.iterations = std::max(t1, t2);
      }
      break;
    }
    case EllFamily::ExpGrowth: {
      const double M = require(q.M, "Assumption 3 bound M (exponential growth)");
      report.formula_id = "nc.exp_growth";
      const double t1 = 8.0 * q.model.L0() * D / eps;
      const double t2 = 32.0 * q.model.L1() * D * std::exp(2.0 * M);
      report.terms.push_back({"8*L0*Delta/eps", t1, true});
      report.terms.push_back({"32*L1*Delta*e^(2M)", t2, true});
      report.iterations = std::max(t1, t2);
      break;
    }
    case EllFamily::Custom: {
      if (!q.model.psi2_strictly_increasing()) {
        report.formula_id = "nc.not_applicable";
        report.iterations = kInf;
        report.applicability_notes.push_back(
            "not applicable: psi2 is not strictly increasing and no "
            "bounded-gradient route exists for this model");
        break;
      }
      report.formula_id = "nc.generic_psi2";
      const double p = q.model.psi2(std::sqrt(eps));
      const double t = 8.0 * D / p;
      report.terms.push_back({"8*Delta/psi2(sqrt(eps))", t, true});
      report.iterations = t;
      break;
    }
  }
  // All nonconvex formulas have pinned constants; terms are max-components,
  // not alternatives.
  report.explicit_iterations = report.iterations;
  return report;
}

RateReport convex_rate(const RateQuery& q) {
  if (!(q.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double R = require(q.R, "R");
  const double eps = q.epsilon;
  RateReport report;
  report.formula_id = "cx.min_over_branches";

  const EllFamily fam = q.model.family();
  const double L0 = q.model.L0();
  const double L1 = q.model.L1();

  if (fam == EllFamily::Constant) {
    report.terms.push_back({"classical L*R^2/eps", L0 * R * R / eps, true});
  }

  const bool power_like =
      fam == EllFamily::Affine || (fam == EllFamily::Power && L1 > 0.0);
  const double rho = fam == EllFamily::Affine ? 1.0 : q.model.rho();

  if (power_like && rho > 0.0 && rho < 2.0) {
    // psi2-inversion route. Two derivations of the rho <= 1 constant
    // exist (4 and 16); the conservative 16 is used and noted.
    const double t1 = 2.0 * L0 * R * R / eps;
    if (rho <= 1.0) {
      const double t2 = 16.0 * std::pow(L1, 2.0 / (2.0 - rho)) * R * R /
                        std::pow(eps, 2.0 * (1.0 - rho) / (2.0 - rho));
      report.terms.push_back({"psi2 route: max{2L0R^2/eps, 16L1^(2/(2-rho))R^2/eps^(2(1-rho)/(2-rho))}",
                              std::max(t1, t2), true});
      report.applicability_notes.push_back(
          "psi2 route uses the conservative constant 16 (a tighter derivation gives 4)");
    } else if (q.Delta) {
      const double t2 = 16.0 * std::pow(L1, 2.0 / (2.0 - rho)) * R * R *
                        std::pow(*q.Delta, 2.0 * (rho - 1.0) / (2.0 - rho));
      report.terms.push_back({"psi2 route: max{2L0R^2/eps, 16L1^(2/(2-rho))R^2 Delta^(2(rho-1)/(2-rho))}",
                              std::max(t1, t2), true});
    } else {
      report.applicability_notes.push_back(
          "psi2 route skipped: needs Delta for 1 < rho < 2");
    }
  }

  if (power_like && rho > 0.0 && rho <= 2.0) {
    // Alternative theory, stated up to universal constants.
    const double t1 = L0 * R * R / eps;
    double inner = kInf;
    bool any = false;
    if (q.Delta) {
      inner = std::min(inner, L1 * std::pow(*q.Delta, rho / 2.0) *
                                  std::pow(R, 2.0 - rho) /
                                  std::pow(eps, 1.0 - rho / 2.0));
      any = true;
    }
    if (q.M0) {
      inner = std::min(inner, L1 * std::pow(*q.M0, rho) * R * R / eps);
      any = true;
    }
    if (any) {
      report.terms.push_back({"alt route (constant-free): max{L0R^2/eps, min{L1 Delta^(rho/2) R^(2-rho)/eps^(1-rho/2), L1 M0^rho R^2/eps}}",
                              std::max(t1, inner), false});
    } else {
      report.applicability_notes.push_back(
          "alt route skipped: needs Delta and/or M0");
    }
  }

  if (fam == EllFamily::Power && rho > 2.0 && L1 > 0.0) {
    if (q.Delta && q.M0) {
      const double D = *q.Delta;
      const double M0 = *q.M0;
      const double head = L0 * R * R / eps;
      const double branch1 =
          L1 * D * std::pow(2.0 * M0, rho - 2.0) +
          std::pow(L0, rho / (2.0 + rho)) * std::pow(D, rho / (2.0 + rho)) *
              std::pow(L1, 2.0 / (2.0 + rho)) *
              std::pow(R, 4.0 / (2.0 + rho)) /
              std::pow(eps, 2.0 / (2.0 + rho));
      const double branch2 = L1 * std::pow(M0, rho) * R * R / eps;
      report.terms.push_back({"superquadratic route (constant-free)",
                              head + std::min(branch1, branch2), false});
    } else {
      report.applicability_notes.push_back(
          "superquadratic route skipped: needs Delta and M0");
    }
  }

  // Small-epsilon dominant-term bound, valid for any model. T_bar (which
  // does not depend on epsilon) is omitted from the inner min, so the
  // reported value is still a valid upper bound.
  if (q.M0) {
    const double ell0 = q.model(0.0);
    const double ell2m0 = q.model(2.0 * *q.M0);
    if (std::isfinite(ell2m0)) {
      report.terms.push_back({"small-eps: ell(0)R^2/eps + ell(2M0)R^2/(2eps)",
                              ell0 * R * R / eps + ell2m0 * R * R / (2.0 * eps),
                              true});
      report.applicability_notes.push_back(
          "small-eps branch drops the epsilon-independent T_bar from the min");
    }
  } else {
    report.applicability_notes.push_back(
        "small-eps branch skipped: needs M0");
  }

  if (report.terms.empty()) {
    throw std::invalid_argument(
        "convex_rate: no branch applies with the supplied constants");
  }
  double best = kInf;
  for (const RateTerm& t : report.terms) best = std::min(best, t.value);
  report.iterations = best;
  finish(report);
  return report;
}

RateReport sgd_rate(const RateQuery& q) {
  const double sigma = require(q.sigma, "sigma");
  const double delta = require(q.delta, "delta");
  require(q.Delta, "Delta");
  const EllFamily fam = q.model.family();
  const bool supported =
      fam == EllFamily::Constant || fam == EllFamily::Affine ||
      (fam == EllFamily::Power && q.model.rho() <= 2.0);
  if (!supported) {
    throw std::invalid_argument("sgd_rate: not covered by the instantiation "
                                "(needs finite ratio and rho <= 2)");
  }

  const double r = q.model.doubling_ratio();
  RateReport nc = nonconvex_rate(q);
  RateReport report;
  report.formula_id = "sgd.ratio_scaled(" + nc.formula_id + ")";
  report.terms = nc.terms;
  const double T = 45.0 * r / 4.0 * nc.iterations;
  report.iterations = T;

  const double t_clamped = std::min(std::ceil(T), 9e18);
  const long B = batch_size(sigma, q.epsilon, std::max(1L, static_cast<long>(t_clamped)), delta);
  report.batch = static_cast<double>(B);
  report.total = static_cast<double>(B) * T;
  report.applicability_notes.push_back(
      "T = (45 r / 4) * nonconvex T with r = " + std::to_string(r));
  report.explicit_iterations = T;
  return report;
}

}  // namespace ellgd
