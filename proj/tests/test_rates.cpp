#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "ellgd/rates.hpp"
#include "test_support.hpp"

using namespace ellgd;
using testsupport::rel_err;

TEST_SUITE_BEGIN("rates");

TEST_CASE("nonconvex closed forms") {
  RateQuery q;
  q.model = EllModel::constant(1.0);
  q.Delta = 1.0;
  q.epsilon = 0.01;
  CHECK(nonconvex_rate(q).iterations == doctest::Approx(400.0));

  q.model = EllModel::power(2.0, 800.0, 2.0);
  q.Delta = 12.5;
  q.epsilon = 0.1;
  const RateReport r = nonconvex_rate(q);
  CHECK(r.iterations ==
        doctest::Approx(std::max(8.0 * 800.0 * 12.5 / 0.1, 32.0 * 2.0 * 12.5)));
  CHECK(r.terms.size() == 2);

  q.model = EllModel::affine(3.3, 1.0);
  q.Delta = 2.0;
  q.epsilon = 0.01;
  CHECK(nonconvex_rate(q).iterations ==
        doctest::Approx(std::max(8.0 * 3.3 * 2.0 / 0.01,
                                 32.0 * 2.0 / std::sqrt(0.01))));

  q.model = EllModel::power(3.0, 1.0, 1.0);
  CHECK_THROWS_AS(nonconvex_rate(q), std::invalid_argument);  // needs M
  q.M = 2.0;
  CHECK(nonconvex_rate(q).iterations ==
        doctest::Approx(std::max(8.0 * 2.0 / 0.01, 64.0 * 2.0 * 4.0)));

  q.model = EllModel::exp_growth(1.0, 0.5);
  q.M = 1.0;
  CHECK(nonconvex_rate(q).iterations ==
        doctest::Approx(std::max(8.0 * 2.0 / 0.01,
                                 32.0 * 0.5 * 2.0 * std::exp(2.0))));
}

TEST_CASE("nonconvex custom routes") {
  RateQuery q;
  q.Delta = 1.0;
  q.epsilon = 0.01;
  q.model = EllModel::custom([](double s) { return 2.0 + s; }, 2.0);
  const RateReport r = nonconvex_rate(q);
  // Generic inversion: 8 Delta / psi2(sqrt(eps)).
  const double psi2 = 0.01 / (2.0 + 2.0 * 0.1);
  CHECK(rel_err(r.iterations, 8.0 / psi2) < 1e-12);

  q.model = EllModel::custom(
      [](double s) { return 1.0 + s * s * s; }, 8.0);  // psi2 not monotone
  const RateReport na = nonconvex_rate(q);
  CHECK(std::isinf(na.iterations));
  REQUIRE(!na.applicability_notes.empty());
  CHECK(na.applicability_notes[0].find("not applicable") != std::string::npos);
}

TEST_CASE("convex branches") {
  RateQuery q;
  q.model = EllModel::constant(2.0);
  q.R = 3.0;
  q.epsilon = 0.01;
  CHECK(convex_rate(q).iterations == doctest::Approx(2.0 * 9.0 / 0.01));

  // Affine: the constant-free alternative branch from the new theory.
  q.model = EllModel::affine(1.0, 0.5);
  q.Delta = 2.0;
  q.M0 = 10.0;
  const RateReport r = convex_rate(q);
  const double alt = std::max(
      1.0 * 9.0 / 0.01,
      std::min(0.5 * std::sqrt(2.0) * 3.0 / std::sqrt(0.01),
               0.5 * 10.0 * 9.0 / 0.01));
  bool found_alt = false;
  bool alt_is_heuristic = false;
  for (const RateTerm& t : r.terms) {
    if (t.name.find("alt route") != std::string::npos) {
      found_alt = true;
      alt_is_heuristic = !t.explicit_constants;
      CHECK(t.value == doctest::Approx(alt));
    }
  }
  CHECK(found_alt);
  CHECK(alt_is_heuristic);
  CHECK(r.explicit_iterations >= r.iterations);

  // The psi2 route for rho = 1 carries the conservative constant 16.
  bool found_psi2 = false;
  for (const RateTerm& t : r.terms) {
    if (t.name.find("psi2 route") != std::string::npos) {
      found_psi2 = true;
      CHECK(t.value ==
            doctest::Approx(std::max(2.0 * 9.0 / 0.01, 16.0 * 0.25 * 9.0)));
      CHECK(t.explicit_constants);
    }
  }
  CHECK(found_psi2);

  // Missing everything: no branch applies.
  RateQuery bare;
  bare.model = EllModel::power(3.0, 1.0, 1.0);
  bare.R = 1.0;
  CHECK_THROWS_AS(convex_rate(bare), std::invalid_argument);
}

TEST_CASE("convex small-eps dominance: report within 2x of ell(0) R^2/eps") {
  const EllModel models[] = {EllModel::constant(2.0),
                             EllModel::affine(1.0, 0.5),
                             EllModel::power(1.5, 2.0, 1.0)};
  for (const EllModel& m : models) {
    RateQuery q;
    q.model = m;
    q.R = 1.0;
    q.Delta = 1.0;
    q.M0 = 5.0;
    q.epsilon = 1e-9;
    const RateReport r = convex_rate(q);
    const double dominant = m(0.0) * 1.0 / q.epsilon;
    CHECK(r.iterations >= 0.5 * dominant);
    CHECK(r.iterations <= 2.0 * dominant);
  }
}

TEST_CASE("rates are non-increasing in epsilon") {
  RateQuery q;
  q.model = EllModel::power(1.5, 2.0, 1.0);
  q.Delta = 1.0;
  q.R = 1.0;
  q.M0 = 5.0;
  double prev_nc = std::numeric_limits<double>::infinity();
  double prev_cx = std::numeric_limits<double>::infinity();
  for (double eps = 1e-6; eps <= 1.0; eps *= 10.0) {
    q.epsilon = eps;
    const double nc = nonconvex_rate(q).iterations;
    const double cx = convex_rate(q).iterations;
    CHECK(nc <= prev_nc);
    CHECK(cx <= prev_cx);
    prev_nc = nc;
    prev_cx = cx;
  }
}

TEST_CASE("sgd rate") {
  RateQuery q;
  q.model = EllModel::constant(1.0);
  q.Delta = 0.5;
  q.epsilon = 0.1;
  q.sigma = 0.0;
  q.delta = 0.2;
  const RateReport r0 = sgd_rate(q);
  CHECK(*r0.batch == 1.0);
  CHECK(*r0.total == doctest::Approx(r0.iterations));
  // T = (45 r / 4) * 4 L Delta / eps with r = 1.
  CHECK(r0.iterations == doctest::Approx(45.0 * 0.5 / 0.1));

  q.sigma = 1.0;
  const RateReport r1 = sgd_rate(q);
  CHECK(*r1.batch >= 1.0);
  CHECK(*r1.total == doctest::Approx(*r1.batch * r1.iterations));

  q.model = EllModel::power(3.0, 1.0, 1.0);
  CHECK_THROWS_AS(sgd_rate(q), std::invalid_argument);
  q.model = EllModel::exp_growth(1.0, 1.0);
  CHECK_THROWS_AS(sgd_rate(q), std::invalid_argument);
}

TEST_CASE("sgd dominant term for power rho=1 is sigma^2 L0 Delta / eps^2") {
  RateQuery q;
  q.model = EllModel::power(1.0, 2.0, 0.5);
  q.Delta = 1.5;
  q.sigma = 2.0;
  q.delta = 0.1;
  for (double eps : {1e-7, 1e-9}) {
    q.epsilon = eps;
    const RateReport r = sgd_rate(q);
    const double lam =
        std::sqrt(3.0 * std::log(std::ceil(r.iterations) / 0.1));
    // total ~= (45*2/4) * 8 L0 Delta/eps * 32 (1+lam)^2 sigma^2/eps
    const double predicted = 22.5 * 8.0 * 2.0 * 1.5 / eps * 32.0 *
                             (1.0 + lam) * (1.0 + lam) * 4.0 / eps;
    CHECK(rel_err(*r.total, predicted) < 0.01);
  }
}

TEST_CASE("report json") {
  RateQuery q;
  q.model = EllModel::constant(1.0);
  q.Delta = 1.0;
  q.epsilon = 0.01;
  const std::string j = nonconvex_rate(q).to_json_string();
  CHECK(j.find("\"formula_id\"") != std::string::npos);
  CHECK(j.find("\"iterations\"") != std::string::npos);
  CHECK(j.find("400") != std::string::npos);
}

TEST_SUITE_END();
