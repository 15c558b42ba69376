#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellgd/problems.hpp"

namespace ellgd {

enum class StepRuleKind {
  PaperIntegral,  // gamma = integral_0^1 dv/ell(g + g v)
  FixedStep,      // constant gamma
  LowerBound,     // gamma = 1/ell(2 g)
};

struct StepRule {
  StepRuleKind kind = StepRuleKind::PaperIntegral;
  double gamma = 0.0;  // FixedStep only

  static StepRule paper_integral() { return {StepRuleKind::PaperIntegral, 0.0}; }
  static StepRule fixed(double gamma) { return {StepRuleKind::FixedStep, gamma}; }
  static StepRule lower_bound() { return {StepRuleKind::LowerBound, 0.0}; }
};

struct SolverConfig {
  long max_iters = 100000;
  std::optional<double> f_gap_tol;  // stop when f - f_star <= tol (needs f_star)
  std::optional<double> grad_tol;   // stop when ||grad||^2 <= tol
  StepRule rule = StepRule::paper_integral();
  // When on, halve a step whose landing point has non-finite f (up to 60
  // times) instead of declaring divergence.
  bool safeguard = false;
};

enum class TerminalStatus {
  ConvergedGap,
  ConvergedGrad,
  MaxIters,
  Diverged,
  SurrogateStop,  // SGD only: ||g_k||^2 <= epsilon/4
};

std::string to_string(TerminalStatus s);

struct TraceRecord {
  long k = 0;
  Vec x;
  double f_val = 0.0;
  double grad_norm = 0.0;  // batch-mean gradient norm for SGD traces
  double step = 0.0;       // 0 on the terminal record
  bool safeguard_hit = false;
  // SGD extras
  long batch = 0;
  double true_grad_norm = std::numeric_limits<double>::quiet_NaN();
};

struct Trace {
  int dim = 1;
  bool stochastic = false;
  std::vector<TraceRecord> records;
  TerminalStatus status = TerminalStatus::MaxIters;

  /// Number of gradient steps taken (records.size() - 1 for normal runs).
  long iterations() const {
    return records.empty() ? 0 : records.back().k;
  }
  const TraceRecord& final_record() const { return records.back(); }
};

/// Gradient descent x_{k+1} = x_k - gamma_k grad f(x_k) with gamma_k chosen
/// per cfg.rule. Records every iterate; stopping rules are checked in the
/// order gap, grad, max_iters. Divergence is declared when f becomes
/// non-finite, the iterate leaves the domain (safeguard off), or the
/// gradient norm exceeds 1e150. Deterministic: identical inputs give
/// bit-identical traces.
Trace solve(const Problem& problem, const Vec& x0, const SolverConfig& cfg);

/// The per-point integral step rule: gamma = optimal_step at ||grad(x)||
/// using the problem certificate. Returns (gamma, grad).
std::pair<double, Vec> paper_step(const Problem& problem, const Vec& x);

}  // namespace ellgd
