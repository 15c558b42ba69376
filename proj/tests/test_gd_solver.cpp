#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "ellgd/gd_solver.hpp"
#include "ellgd/qcalc.hpp"
#include "ellgd/trace_io.hpp"
#include "test_support.hpp"

using namespace ellgd;
using testsupport::rel_err;

TEST_SUITE_BEGIN("gd_solver");

TEST_CASE("quadratic converges in one exact step") {
  const Problem q = builtin("quadratic", {{"L", 2.0}});
  SolverConfig cfg;
  cfg.grad_tol = 1e-20;
  const Trace t = solve(q, {3.0}, cfg);
  CHECK(t.status == TerminalStatus::ConvergedGrad);
  CHECK(t.iterations() == 1);
  CHECK(t.records.size() == 2);
  CHECK(t.records[0].step == 0.5);
  CHECK(t.records[1].x[0] == 0.0);  // L is a power of two, step is exact
}

TEST_CASE("log_barrier experiment: converges near the reported count") {
  const Problem p = builtin("log_barrier");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  const Trace t = solve(p, {1e-7}, cfg);
  CHECK(t.status == TerminalStatus::ConvergedGap);
  CHECK(t.iterations() >= 50);
  CHECK(t.iterations() <= 100);
}

TEST_CASE("log_barrier with the undersized affine certificate diverges") {
  Problem p = builtin("log_barrier");
  p.certified_ell = EllModel::affine(800.0, 2.0);
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  cfg.max_iters = 10000;
  const Trace t = solve(p, {1e-7}, cfg);
  CHECK(t.status == TerminalStatus::Diverged);
}

TEST_CASE("safeguard rescues the affine-certificate run") {
  Problem p = builtin("log_barrier");
  p.certified_ell = EllModel::affine(800.0, 2.0);
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  cfg.safeguard = true;
  cfg.max_iters = 20000;
  const Trace t = solve(p, {1e-7}, cfg);
  CHECK(t.status == TerminalStatus::ConvergedGap);
  bool any_hit = false;
  for (const auto& r : t.records) any_hit = any_hit || r.safeguard_hit;
  CHECK(any_hit);
}

TEST_CASE("paper_step") {
  const Problem q = builtin("quadratic", {{"L", 4.0}});
  CHECK(paper_step(q, {9.0}).first == 0.25);
  CHECK(paper_step(q, {-0.001}).first == 0.25);

  const Problem e = builtin("exp_sum");
  CHECK(rel_err(paper_step(e, {0.5}).first, 1.0 / 3.3) < 1e-12);

  const Problem lb = builtin("log_barrier");
  const auto [gamma, grad] = paper_step(lb, {1e-7});
  const double g = std::abs(grad[0]);
  CHECK(g == doctest::Approx(1e7).epsilon(1e-4));
  CHECK(gamma >= 1.0 / (800.0 + 2.0 * 4.0 * g * g));
  CHECK(gamma <= 1.0 / (800.0 + 2.0 * g * g));
}

TEST_CASE("lower-bound rule uses 1/ell(2g)") {
  const Problem e = builtin("exp_sum");
  SolverConfig cfg;
  cfg.rule = StepRule::lower_bound();
  cfg.f_gap_tol = 1e-5;
  const Trace t = solve(e, {-1.0}, cfg);
  CHECK(t.status == TerminalStatus::ConvergedGap);
  for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
    const auto& r = t.records[i];
    CHECK(rel_err(r.step, 1.0 / (3.3 + 2.0 * r.grad_norm)) < 1e-12);
  }
}

TEST_CASE("descent, monotonicity and contraction along an exp_sum trajectory") {
  const Problem e = builtin("exp_sum");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-10;
  const Trace t = solve(e, {-3.0}, cfg);
  REQUIRE(t.status == TerminalStatus::ConvergedGap);

  const double delta = t.records.front().f_val - *e.f_star;
  double run_min = 1e300;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    // per-step descent
    if (i + 1 < t.records.size()) {
      const auto& nxt = t.records[i + 1];
      CHECK(nxt.f_val <= r.f_val - (r.step / 4.0) * r.grad_norm * r.grad_norm +
                             1e-12 * std::max(1.0, std::abs(r.f_val)));
      // gradient norms decrease on convex problems
      CHECK(nxt.grad_norm <= r.grad_norm * (1.0 + 1e-10));
      // distance halving
      const double da = 0.5 * (r.x[0] - 0.5) * (r.x[0] - 0.5);
      const double db = 0.5 * (nxt.x[0] - 0.5) * (nxt.x[0] - 0.5);
      const double drop = (r.f_val - *e.f_star) / (3.3 + 2.0 * r.grad_norm);
      CHECK(db <= da - drop + 1e-12 * std::max(1.0, da));
    }
    // aggregate bound for every prefix
    run_min = std::min(run_min,
                       r.grad_norm * r.grad_norm / (3.3 + 2.0 * r.grad_norm));
    const double bound = 4.0 * delta / static_cast<double>(i + 1);
    CHECK(run_min <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("determinism: identical runs give bit-identical traces") {
  const Problem p = builtin("log_barrier");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  const Trace a = solve(p, {1e-7}, cfg);
  const Trace b = solve(p, {1e-7}, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].x == b.records[i].x);
    CHECK(a.records[i].f_val == b.records[i].f_val);
    CHECK(a.records[i].step == b.records[i].step);
  }
}

TEST_CASE("invalid configurations") {
  const Problem p = builtin("log_barrier");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-5;
  CHECK_THROWS_AS(solve(p, {0.5}, cfg), std::invalid_argument);   // outside
  CHECK_THROWS_AS(solve(p, {0.0}, cfg), std::invalid_argument);   // boundary
  SolverConfig bad;
  bad.rule = StepRule::fixed(0.0);
  CHECK_THROWS_AS(solve(p, {0.05}, bad), std::invalid_argument);
  const Problem n = builtin("neg_log");
  SolverConfig gap;
  gap.f_gap_tol = 1e-5;  // neg_log has no f_star
  CHECK_THROWS_AS(solve(n, {1.0}, gap), std::invalid_argument);
}

TEST_CASE("trace csv roundtrip is bit exact") {
  const Problem p = builtin("log_barrier");
  SolverConfig cfg;
  cfg.f_gap_tol = 1e-3;
  const Trace t = solve(p, {1e-4}, cfg);

  std::ostringstream out;
  write_trace_csv(t, out);
  const std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) == "k,x0,f,grad_norm,step,safeguard");

  std::istringstream in(text);
  const Trace back = read_trace_csv(in);
  REQUIRE(back.records.size() == t.records.size());
  CHECK(back.dim == 1);
  CHECK(!back.stochastic);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(back.records[i].x[0] == t.records[i].x[0]);
    CHECK(back.records[i].f_val == t.records[i].f_val);
    CHECK(back.records[i].grad_norm == t.records[i].grad_norm);
    CHECK(back.records[i].step == t.records[i].step);
  }
}

TEST_CASE("stochastic trace csv carries batch and true gradient") {
  Trace t;
  t.dim = 2;
  t.stochastic = true;
  t.records.push_back({0, {1.0, 2.0}, 2.5, 2.2360679774997896, 0.2, false, 17, 2.23});
  std::ostringstream out;
  write_trace_csv(t, out);
  const std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "k,x0,x1,f,grad_norm,step,safeguard,batch,true_grad_norm");
  std::istringstream in(text);
  const Trace back = read_trace_csv(in);
  CHECK(back.stochastic);
  CHECK(back.records[0].batch == 17);
  CHECK(back.records[0].true_grad_norm == 2.23);
}

TEST_SUITE_END();
