#include "ellgd/gd_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "ellgd/qcalc.hpp"

namespace ellgd {

namespace {

constexpr double kGradNormCap = 1e150;

Vec take_step(const Vec& x, double gamma, const Vec& g) {
  Vec next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - gamma * g[i];
  return next;
}

}  // namespace

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::ConvergedGap: return "ConvergedGap";
    case TerminalStatus::ConvergedGrad: return "ConvergedGrad";
    case TerminalStatus::MaxIters: return "MaxIters";
    case TerminalStatus::Diverged: return "Diverged";
    case TerminalStatus::SurrogateStop: return "SurrogateStop";
  }
  return "Unknown";
}

std::pair<double, Vec> paper_step(const Problem& problem, const Vec& x) {
  if (!problem.certified_ell) {
    throw std::invalid_argument("paper_step: problem has no certified ell model");
  }
  Vec g = problem.grad(x);
  const QEvaluator ev(*problem.certified_ell);
  const double gamma = ev.optimal_step(norm(g));
  return {gamma, std::move(g)};
}

Trace solve(const Problem& problem, const Vec& x0, const SolverConfig& cfg) {
  if (static_cast<int>(x0.size()) != problem.dim) {
    throw std::invalid_argument("solve: x0 dimension mismatch");
  }
  if (!problem.domain.contains(x0) || !std::isfinite(problem.f(x0))) {
    throw std::invalid_argument("solve: x0 outside domain or f(x0) not finite");
  }
  if (cfg.f_gap_tol && !problem.f_star) {
    throw std::invalid_argument("solve: f_gap_tol requires a known f_star");
  }
  if (cfg.rule.kind == StepRuleKind::FixedStep && !(cfg.rule.gamma > 0.0)) {
    throw std::invalid_argument("solve: FixedStep requires gamma > 0");
  }

  const bool needs_ell = cfg.rule.kind != StepRuleKind::FixedStep;
  if (needs_ell && !problem.certified_ell) {
    throw std::invalid_argument("solve: step rule requires a certified ell model");
  }
  std::optional<QEvaluator> ev;
  if (needs_ell) ev.emplace(*problem.certified_ell);

  Trace trace;
  trace.dim = problem.dim;

  Vec x = x0;
  for (long k = 0;; ++k) {
    const double f_val = problem.f(x);
    if (!std::isfinite(f_val)) {
      trace.records.push_back({k, x, f_val,
                               std::numeric_limits<double>::quiet_NaN(), 0.0,
                               false});
      trace.status = TerminalStatus::Diverged;
      break;
    }
    const Vec g = problem.grad(x);
    const double gn = norm(g);
    if (!std::isfinite(gn) || gn > kGradNormCap) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false});
      trace.status = TerminalStatus::Diverged;
      break;
    }
    if (cfg.f_gap_tol && f_val - *problem.f_star <= *cfg.f_gap_tol) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false});
      trace.status = TerminalStatus::ConvergedGap;
      break;
    }
    if (cfg.grad_tol && gn * gn <= *cfg.grad_tol) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false});
      trace.status = TerminalStatus::ConvergedGrad;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false});
      trace.status = TerminalStatus::MaxIters;
      break;
    }

    double gamma = 0.0;
    switch (cfg.rule.kind) {
      case StepRuleKind::PaperIntegral:
        gamma = ev->optimal_step(gn);
        break;
      case StepRuleKind::FixedStep:
        gamma = cfg.rule.gamma;
        break;
      case StepRuleKind::LowerBound:
        gamma = 1.0 / (*problem.certified_ell)(2.0 * gn);
        break;
    }

    bool safeguard_hit = false;
    Vec next = take_step(x, gamma, g);
    if (cfg.safeguard) {
      int halvings = 0;
      while (!std::isfinite(problem.f(next)) && halvings < 60) {
        gamma *= 0.5;
        next = take_step(x, gamma, g);
        safeguard_hit = true;
        ++halvings;
      }
    }

    trace.records.push_back({k, x, f_val, gn, gamma, safeguard_hit});
    x = std::move(next);
  }
  return trace;
}

}  // namespace ellgd
