#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellgd/ell_model.hpp"
#include "ellgd/rng.hpp"

namespace ellgd {

using Vec = std::vector<double>;

double norm(const Vec& v);
double dot(const Vec& a, const Vec& b);

/// Open axis-aligned box, possibly unbounded. Membership is strict, so
/// boundary points count as outside.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  static Box unbounded(int dim);
};

/// Benchmark objective with analytic gradient, an open domain description
/// and (usually) a certified smoothness model. f returns +infinity exactly
/// when the argument is outside the open domain. Oracles are pure.
struct Problem {
  std::string name;
  int dim = 1;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad;
  std::function<double(const Vec&)> hess_norm;  // empty when unavailable
  Box domain;
  std::optional<EllModel> certified_ell;
  std::optional<double> f_star;
  std::optional<Vec> x_star;
  bool convex = false;
  Box sample_box;  // bounded region used by the verification samplers
};

/// Built-in registry:
///
///   "log_barrier"           f(x) = -log x - log(0.1 - x) on (0, 0.1)
///   "exp_sum"               f(x) = e^x + e^(1-x)
///   "exp_drift"  (mu, L1)   f(x) = -mu x + e^(L1 x)
///   "toy_net"               f(x, y) = log(1 + exp(-x y)); no certificate
///   "quadratic"  (L, dim)   f(x) = (L/2) ||x||^2
///   "neg_log"    (L0)       f(x) = -log x on (0, inf); no minimizer
///
/// Throws std::invalid_argument for unknown names or bad parameters.
Problem builtin(const std::string& name,
                const std::map<std::string, double>& params = {});

/// JSON descriptor form, e.g. {"name":"exp_drift","mu":0.01,"L1":1.0}.
Problem problem_from_json_string(const std::string& text);

/// Gradient oracle with additive isotropic Gaussian noise. The
/// per-coordinate variance is sigma^2/(4d), which keeps the light-tail
/// moment bound E exp(||noise||^2/sigma^2) <= e^(3/8) < e for every
/// dimension. sigma = 0 returns the exact gradient and consumes no
/// randomness. One instance per thread; fork() with distinct seeds is the
/// parallelism mechanism.
class StochasticOracle {
 public:
  StochasticOracle(Problem base, double sigma, std::uint64_t seed);

  /// Mean of `batch` independent noisy gradients at x. Deterministic given
  /// (seed, call sequence). Throws std::domain_error when x is outside the
  /// domain.
  Vec sample_gradient(const Vec& x, long batch);

  const Problem& base() const { return base_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return rng_.seed(); }

  StochasticOracle fork(std::uint64_t seed) const {
    return StochasticOracle(base_, sigma_, seed);
  }

 private:
  Problem base_;
  double sigma_;
  CounterRng rng_;
};

}  // namespace ellgd
