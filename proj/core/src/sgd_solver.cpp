#include "ellgd/sgd_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "ellgd/qcalc.hpp"

namespace ellgd {

long batch_size(double sigma, double epsilon, long T, double delta) {
  if (!(sigma >= 0.0) || !(epsilon > 0.0) || T < 1 ||
      !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("batch_size: arguments out of range");
  }
  if (sigma == 0.0) return 1;
  const double lam = std::sqrt(3.0 * std::log(static_cast<double>(T) / delta));
  const double b = 32.0 * (1.0 + lam) * (1.0 + lam) * sigma * sigma / epsilon;
  return std::max(static_cast<long>(std::ceil(b)), 1L);
}

Trace sgd_solve(const StochasticOracle& oracle, const Vec& x0,
                const SgdConfig& cfg) {
  const Problem& problem = oracle.base();
  if (!problem.certified_ell) {
    throw std::invalid_argument("sgd_solve: problem has no certified ell model");
  }
  const double r = problem.certified_ell->doubling_ratio();
  if (std::isinf(r)) {
    throw std::invalid_argument(
        "sgd_solve: step scaling needs a finite doubling ratio "
        "r = sup ell(2s)/ell(s); this model has r = infinity");
  }
  if (static_cast<int>(x0.size()) != problem.dim) {
    throw std::invalid_argument("sgd_solve: x0 dimension mismatch");
  }
  if (!problem.domain.contains(x0) || !std::isfinite(problem.f(x0))) {
    throw std::invalid_argument("sgd_solve: x0 outside domain or f(x0) not finite");
  }
  if (!(cfg.epsilon > 0.0) || !(cfg.delta > 0.0 && cfg.delta < 1.0) || cfg.T < 1) {
    throw std::invalid_argument("sgd_solve: invalid config");
  }

  const long B = cfg.batch_override
                     ? *cfg.batch_override
                     : batch_size(cfg.sigma, cfg.epsilon, cfg.T, cfg.delta);
  if (B < 1) throw std::invalid_argument("sgd_solve: batch must be >= 1");

  StochasticOracle stream = oracle.fork(cfg.seed);
  const QEvaluator ev(*problem.certified_ell);

  Trace trace;
  trace.dim = problem.dim;
  trace.stochastic = true;

  Vec x = x0;
  for (long k = 0;; ++k) {
    const double f_val = problem.f(x);
    if (!std::isfinite(f_val)) {
      trace.records.push_back({k, x, f_val,
                               std::numeric_limits<double>::quiet_NaN(), 0.0,
                               false, B,
                               std::numeric_limits<double>::quiet_NaN()});
      trace.status = TerminalStatus::Diverged;
      break;
    }
    const double true_gn = norm(problem.grad(x));
    const Vec g = stream.sample_gradient(x, B);
    const double gn = norm(g);
    if (!std::isfinite(gn) || gn > 1e150) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false, B, true_gn});
      trace.status = TerminalStatus::Diverged;
      break;
    }
    if (cfg.surrogate_stop && gn * gn <= cfg.epsilon / 4.0) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false, B, true_gn});
      trace.status = TerminalStatus::SurrogateStop;
      break;
    }
    if (k >= cfg.T) {
      trace.records.push_back({k, x, f_val, gn, 0.0, false, B, true_gn});
      trace.status = TerminalStatus::MaxIters;
      break;
    }

    const double gamma = ev.optimal_step(gn) / (5.0 * r);
    trace.records.push_back({k, x, f_val, gn, gamma, false, B, true_gn});
    for (int i = 0; i < problem.dim; ++i) x[i] -= gamma * g[i];
  }
  return trace;
}

}  // namespace ellgd
