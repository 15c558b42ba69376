#include "ellgd/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ellgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Spectral norm of a symmetric 2x2 matrix [[a, b], [b, d]].
double sym2x2_norm(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return std::max(std::abs(mean + disc), std::abs(mean - disc));
}

}  // namespace

double norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool Box::contains(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  }
  return true;
}

Box Box::unbounded(int dim) {
  return Box{Vec(dim, -kInf), Vec(dim, kInf)};
}

Problem builtin(const std::string& name,
                const std::map<std::string, double>& params) {
  if (name == "log_barrier") {
    Problem p;
    p.name = name;
    p.dim = 1;
    p.domain = Box{{0.0}, {0.1}};
    p.f = [dom = p.domain](const Vec& x) {
      if (!dom.contains(x)) return kInf;
      return -std::log(x[0]) - std::log(0.1 - x[0]);
    };
    p.grad = [](const Vec& x) {
      return Vec{-1.0 / x[0] + 1.0 / (0.1 - x[0])};
    };
    p.hess_norm = [](const Vec& x) {
      const double u = 1.0 / x[0];
      const double w = 1.0 / (0.1 - x[0]);
      return u * u + w * w;
    };
    p.certified_ell = EllModel::power(2.0, 800.0, 2.0);
    p.x_star = Vec{0.05};
    p.f_star = -2.0 * std::log(0.05);
    p.convex = true;
    p.sample_box = p.domain;
    return p;
  }

  if (name == "exp_sum") {
    Problem p;
    p.name = name;
    p.dim = 1;
    p.domain = Box::unbounded(1);
    p.f = [](const Vec& x) { return std::exp(x[0]) + std::exp(1.0 - x[0]); };
    p.grad = [](const Vec& x) {
      return Vec{std::exp(x[0]) - std::exp(1.0 - x[0])};
    };
    p.hess_norm = [](const Vec& x) {
      return std::exp(x[0]) + std::exp(1.0 - x[0]);
    };
    p.certified_ell = EllModel::affine(3.3, 1.0);
    p.x_star = Vec{0.5};
    p.f_star = 2.0 * std::exp(0.5);
    p.convex = true;
    p.sample_box = Box{{-6.0}, {7.0}};
    return p;
  }

  if (name == "exp_drift") {
    const double mu = get_param(params, "mu", 0.0);
    const double L1 = get_param(params, "L1", 0.0);
    if (!(mu > 0.0) || !(L1 > 0.0)) {
      throw std::invalid_argument("exp_drift requires mu > 0 and L1 > 0");
    }
    Problem p;
    p.name = name;
    p.dim = 1;
    p.domain = Box::unbounded(1);
    p.f = [mu, L1](const Vec& x) {
      return -mu * x[0] + std::exp(L1 * x[0]);
    };
    p.grad = [mu, L1](const Vec& x) {
      return Vec{-mu + L1 * std::exp(L1 * x[0])};
    };
    p.hess_norm = [L1](const Vec& x) {
      return L1 * L1 * std::exp(L1 * x[0]);
    };
    p.certified_ell = EllModel::affine(L1 * mu, L1);
    const double xs = std::log(mu / L1) / L1;
    p.x_star = Vec{xs};
    p.f_star = -mu * xs + mu / L1;
    p.convex = true;
    p.sample_box = Box{{xs - 5.0 / L1}, {xs + 5.0 / L1}};
    return p;
  }

  if (name == "toy_net") {
    Problem p;
    p.name = name;
    p.dim = 2;
    p.domain = Box::unbounded(2);
    p.f = [](const Vec& v) {
      const double t = -v[0] * v[1];
      // log(1 + e^t) without overflow
      return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    };
    p.grad = [](const Vec& v) {
      const double c = 1.0 / (1.0 + std::exp(v[0] * v[1]));
      return Vec{-c * v[1], -c * v[0]};
    };
    p.hess_norm = [](const Vec& v) {
      const double e = std::exp(v[0] * v[1]);
      const double s = e / ((1.0 + e) * (1.0 + e));
      const double c = 1.0 / (1.0 + e);
      return sym2x2_norm(s * v[1] * v[1], s * v[0] * v[1] - c,
                         s * v[0] * v[0]);
    };
    // No global certificate exists; callers supply one for restricted
    // domain studies.
    p.convex = false;
    p.sample_box = Box{{-3.0, -3.0}, {3.0, 3.0}};
    return p;
  }

  if (name == "quadratic") {
    const double L = get_param(params, "L", 1.0);
    const int dim = static_cast<int>(get_param(params, "dim", 1.0));
    if (!(L > 0.0) || dim < 1) {
      throw std::invalid_argument("quadratic requires L > 0 and dim >= 1");
    }
    Problem p;
    p.name = name;
    p.dim = dim;
    p.domain = Box::unbounded(dim);
    p.f = [L](const Vec& x) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return 0.5 * L * s;
    };
    p.grad = [L](const Vec& x) {
      Vec g(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = L * x[i];
      return g;
    };
    p.hess_norm = [L](const Vec&) { return L; };
    p.certified_ell = EllModel::constant(L);
    p.x_star = Vec(dim, 0.0);
    p.f_star = 0.0;
    p.convex = true;
    p.sample_box = Box{Vec(dim, -10.0), Vec(dim, 10.0)};
    return p;
  }

  if (name == "neg_log") {
    const double L0 = get_param(params, "L0", 1.0);
    if (!(L0 > 0.0)) throw std::invalid_argument("neg_log requires L0 > 0");
    Problem p;
    p.name = name;
    p.dim = 1;
    p.domain = Box{{0.0}, {kInf}};
    p.f = [dom = p.domain](const Vec& x) {
      if (!dom.contains(x)) return kInf;
      return -std::log(x[0]);
    };
    p.grad = [](const Vec& x) { return Vec{-1.0 / x[0]}; };
    p.hess_norm = [](const Vec& x) { return 1.0 / (x[0] * x[0]); };
    // f'' equals f'^2 exactly, so any L0 > 0 certifies.
    p.certified_ell = EllModel::power(2.0, L0, 1.0);
    p.convex = true;
    p.sample_box = Box{{0.05}, {20.0}};
    return p;
  }

  throw std::invalid_argument("unknown builtin problem: " + name);
}

Problem problem_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid problem descriptor: ") + e.what());
  }
  if (!j.is_object() || !j.contains("name")) {
    throw std::invalid_argument("problem descriptor must be an object with a \"name\" key");
  }
  std::map<std::string, double> params;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (!value.is_number()) {
      throw std::invalid_argument("problem parameter " + key + " must be numeric");
    }
    params[key] = value.get<double>();
  }
  return builtin(j.at("name").get<std::string>(), params);
}

StochasticOracle::StochasticOracle(Problem base, double sigma,
                                   std::uint64_t seed)
    : base_(std::move(base)), sigma_(sigma), rng_(seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be non-negative and finite");
  }
}

Vec StochasticOracle::sample_gradient(const Vec& x, long batch) {
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (!base_.domain.contains(x)) {
    throw std::domain_error("sample_gradient: point outside domain");
  }
  Vec g = base_.grad(x);
  if (sigma_ == 0.0) return g;

  const int d = base_.dim;
  const double coord_std = sigma_ / (2.0 * std::sqrt(static_cast<double>(d)));
  Vec noise_mean(d, 0.0);
  for (long b = 0; b < batch; ++b) {
    for (int i = 0; i < d; ++i) {
      noise_mean[i] += rng_.next_gaussian();
    }
  }
  for (int i = 0; i < d; ++i) {
    g[i] += coord_std * noise_mean[i] / static_cast<double>(batch);
  }
  return g;
}

}  // namespace ellgd
