#include "ellgd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ellgd/qcalc.hpp"
#include "ellgd/rng.hpp"

namespace ellgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void record_slack(CheckReport& report, double slack) {
  ++report.samples;
  if (slack < -report.tolerance) ++report.violations;
  report.worst_margin = std::min(report.worst_margin, slack);
}

Vec sample_interior(const Box& box, CounterRng& rng) {
  Vec x(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    const double width = box.hi[i] - box.lo[i];
    if (!std::isfinite(width)) {
      throw std::invalid_argument("sample box must be bounded");
    }
    const double inset = 1e-6 * width;
    x[i] = box.lo[i] + inset + (width - 2.0 * inset) * rng.next_in(0.0, 1.0);
  }
  return x;
}

// y is pulled toward x until ||y - x|| < limit; stays inside the (convex)
// box because it moves along the segment.
void clamp_into_ball(const Vec& x, Vec& y, double limit, CounterRng& rng) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += (y[i] - x[i]) * (y[i] - x[i]);
  }
  d = std::sqrt(d);
  if (d < limit || d == 0.0) return;
  const double scale = limit * rng.next_in(0.0, 1.0) / d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + (y[i] - x[i]) * scale;
  }
}

void require_certificate(const Problem& problem, const char* who) {
  if (!problem.certified_ell) {
    throw std::invalid_argument(std::string(who) + ": problem has no certificate");
  }
}

double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

QEvaluator make_verify_evaluator(const Problem& problem) {
  // The outer quadratures below integrate over root-finds, so q itself is
  // evaluated an order tighter than the outer tolerance; otherwise the
  // inversion noise floor stalls the outer refinement.
  return QEvaluator(*problem.certified_ell, 1e-11, 50, 1e-12);
}

constexpr QuadratureControl kOuterCtl{5e-9, 26};

// Integral of q_inverse(tau; gn) over [t0, t1], by adaptive quadrature over
// the numerically inverted q.
double integral_of_inverse(const QEvaluator& ev, double gn, double t0,
                           double t1) {
  if (t0 == t1) return 0.0;
  return adaptive_simpson([&](double tau) { return ev.q_inverse(tau, gn); },
                          t0, t1, kOuterCtl);
}

}  // namespace

CheckReport check_gradient_deviation(const Problem& problem,
                                     long n_samples, std::uint64_t seed) {
  require_certificate(problem, "check_gradient_deviation");
  const QEvaluator ev = make_verify_evaluator(problem);
  CheckReport report{"gradient_deviation." + problem.name, 0, 0, 0, kInf, 1e-8};
  CounterRng rng(seed);

  for (long i = 0; i < n_samples; ++i) {
    const Vec x = sample_interior(problem.sample_box, rng);
    Vec y = sample_interior(problem.sample_box, rng);
    const Vec gx = problem.grad(x);
    const double a = norm(gx);
    try {
      const double limit = 0.9 * ev.q_max(a);
      clamp_into_ball(x, y, limit, rng);
      const Vec gy = problem.grad(y);
      Vec gdiff(gx.size());
      for (std::size_t j = 0; j < gx.size(); ++j) gdiff[j] = gy[j] - gx[j];
      const double lhs = norm(gdiff);
      const double bound = ev.q_inverse(distance(x, y), a);
      record_slack(report, (bound - lhs) / (1.0 + bound));
    } catch (const QuadratureError&) {
      ++report.errors;
    }
  }
  return report;
}

CheckReport check_upper_bound(const Problem& problem, long n_samples,
                              std::uint64_t seed) {
  require_certificate(problem, "check_upper_bound");
  const QEvaluator ev = make_verify_evaluator(problem);
  CheckReport report{"upper_bound." + problem.name, 0, 0, 0, kInf, 1e-8};
  CounterRng rng(seed);

  for (long i = 0; i < n_samples; ++i) {
    const Vec x = sample_interior(problem.sample_box, rng);
    Vec y = sample_interior(problem.sample_box, rng);
    const Vec gx = problem.grad(x);
    const double a = norm(gx);
    try {
      const double limit = 0.9 * ev.q_max(a);
      clamp_into_ball(x, y, limit, rng);
      const double fx = problem.f(x);
      Vec diff(y.size());
      for (std::size_t j = 0; j < y.size(); ++j) diff[j] = y[j] - x[j];
      const double integral = integral_of_inverse(ev, a, 0.0, norm(diff));
      const double rhs = fx + dot(gx, diff) + integral;
      const double fy = problem.f(y);
      // Normalizing by the integral as well keeps quadrature noise inside
      // the tolerance when rhs nearly cancels (tight pairs).
      record_slack(report, (rhs - fy) / (1.0 + std::abs(rhs) + integral));
    } catch (const QuadratureError&) {
      ++report.errors;
    }
  }
  return report;
}

CheckReport check_optimality(const Problem& problem, const Vec& x,
                             long n_perturbations, std::uint64_t seed) {
  require_certificate(problem, "check_optimality");
  if (!problem.domain.contains(x)) {
    throw std::invalid_argument("check_optimality: x outside domain");
  }
  const QEvaluator ev = make_verify_evaluator(problem);
  const Vec g = problem.grad(x);
  const double gn = norm(g);
  if (gn == 0.0) {
    throw std::invalid_argument("check_optimality: zero gradient at x");
  }
  CheckReport report{"step_optimality." + problem.name, 0, 0, 0, kInf, 1e-8};
  CounterRng rng(seed);

  const double fx = problem.f(x);
  const double gamma = ev.optimal_step(gn);
  const double d_star = gamma * gn;
  const double i_star = integral_of_inverse(ev, gn, 0.0, d_star);
  const double u_star = fx - gamma * gn * gn + i_star;

  // Closed-route cross-check: minimized bound equals f(x) - decrement.
  const double dd = ev.descent_decrement(gn);
  const double expected = fx - dd;
  record_slack(report, -std::abs(u_star - expected) /
                           (1.0 + std::abs(fx) + gamma * gn * gn + i_star + dd));

  Vec y_star(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y_star[j] = x[j] - gamma * g[j];

  // Unbounded q_max would allow radii where q_inverse overflows; cap the
  // perturbations at the sample-box scale.
  double diag = 0.0;
  for (int j = 0; j < problem.sample_box.dim(); ++j) {
    const double w = problem.sample_box.hi[j] - problem.sample_box.lo[j];
    diag += w * w;
  }
  diag = std::sqrt(diag);
  const double limit =
      std::min(0.9 * ev.q_max(gn), std::max(diag, 2.0 * d_star));
  for (long i = 0; i < n_perturbations; ++i) {
    Vec dir(x.size());
    double dn = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      dir[j] = rng.next_gaussian();
      dn += dir[j] * dir[j];
    }
    dn = std::sqrt(dn);
    if (dn == 0.0) dn = 1.0;
    const double radius = limit * rng.next_in(0.0, 1.0);
    Vec y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      y[j] = x[j] + radius * dir[j] / dn;
    }
    try {
      // U(y) - U(y*) evaluated as a difference, so the integral part only
      // spans [d*, ||y-x||] and stays accurate near the optimum.
      Vec diff(y.size());
      for (std::size_t j = 0; j < y.size(); ++j) diff[j] = y[j] - y_star[j];
      const double d_y = radius;
      const double tail = integral_of_inverse(ev, gn, std::min(d_star, d_y),
                                              std::max(d_star, d_y));
      const double delta_u =
          dot(g, diff) + (d_y >= d_star ? tail : -tail);
      record_slack(report,
                   delta_u / (1.0 + std::abs(u_star) + std::abs(tail)));
    } catch (const QuadratureError&) {
      ++report.errors;
    }
  }
  return report;
}

std::vector<CheckReport> check_trajectory(const Trace& trace,
                                          const Problem& problem) {
  require_certificate(problem, "check_trajectory");
  if (trace.dim != problem.dim) {
    throw std::invalid_argument("check_trajectory: trace/problem dimension mismatch");
  }
  if (trace.records.empty()) {
    throw std::invalid_argument("check_trajectory: empty trace");
  }
  if (trace.stochastic) {
    throw std::invalid_argument("check_trajectory: trace/rule mismatch (stochastic trace)");
  }
  const QEvaluator ev(*problem.certified_ell);
  const EllModel& ell = *problem.certified_ell;

  // The trace must have been produced by the integral rule on this problem:
  // recompute f and the step at every recorded point.
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    const double f_here = problem.f(r.x);
    if (!(std::abs(f_here - r.f_val) <=
          1e-9 * std::max(1.0, std::abs(f_here)))) {
      throw std::invalid_argument("check_trajectory: trace/problem mismatch (f)");
    }
    if (i + 1 < trace.records.size()) {
      const double expected = ev.optimal_step(r.grad_norm);
      if (!(std::abs(expected - r.step) <= 1e-6 * expected)) {
        throw std::invalid_argument(
            "check_trajectory: trace/rule mismatch (step is not the integral rule)");
      }
    }
  }

  std::vector<CheckReport> reports;

  CheckReport descent{"trajectory.descent." + problem.name, 0, 0, 0, kInf, 1e-12};
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const TraceRecord& a = trace.records[i];
    const TraceRecord& b = trace.records[i + 1];
    const double promised = a.f_val - (a.step / 4.0) * a.grad_norm * a.grad_norm;
    record_slack(descent, (promised - b.f_val) / std::max(1.0, std::abs(a.f_val)));
  }
  reports.push_back(descent);

  if (problem.f_star) {
    CheckReport aggregate{"trajectory.aggregate." + problem.name, 0, 0, 0, kInf, 1e-9};
    const double delta = trace.records.front().f_val - *problem.f_star;
    double run_min = kInf;
    for (std::size_t t = 1; t <= trace.records.size(); ++t) {
      const TraceRecord& r = trace.records[t - 1];
      const double denom = ell(2.0 * r.grad_norm);
      run_min = std::min(run_min, std::isinf(denom)
                                      ? 0.0
                                      : r.grad_norm * r.grad_norm / denom);
      const double bound = 4.0 * delta / static_cast<double>(t);
      record_slack(aggregate, (bound - run_min) / std::max(bound, 1e-300));
    }
    reports.push_back(aggregate);
  }

  if (problem.convex) {
    CheckReport mono{"trajectory.grad_monotone." + problem.name, 0, 0, 0, kInf, 1e-10};
    for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
      const double ga = trace.records[i].grad_norm;
      const double gb = trace.records[i + 1].grad_norm;
      record_slack(mono, (ga - gb) / std::max(ga, 1e-300));
    }
    reports.push_back(mono);
  }

  if (problem.convex && problem.x_star && problem.f_star) {
    CheckReport contraction{"trajectory.distance_contraction." + problem.name,
                            0, 0, 0, kInf, 1e-12};
    for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
      const TraceRecord& a = trace.records[i];
      const TraceRecord& b = trace.records[i + 1];
      const double da = 0.5 * distance(a.x, *problem.x_star) *
                        distance(a.x, *problem.x_star);
      const double db = 0.5 * distance(b.x, *problem.x_star) *
                        distance(b.x, *problem.x_star);
      const double drop = (a.f_val - *problem.f_star) / ell(2.0 * a.grad_norm);
      record_slack(contraction, (da - drop - db) / std::max(1.0, da));
    }
    reports.push_back(contraction);
  }

  return reports;
}

}  // namespace ellgd
