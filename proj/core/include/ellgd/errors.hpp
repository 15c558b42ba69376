#pragma once

#include <stdexcept>
#include <string>

namespace ellgd {

/// Adaptive quadrature did not reach the requested tolerance within the
/// depth budget. Carries the best estimate so callers can decide whether
/// to proceed anyway.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// psi2 failed the monotonicity check and has no usable inverse.
class NotInvertibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested value lies at or above sup psi2.
class OutOfImageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// q_inverse was asked for a value at or beyond q_max.
class BeyondQMaxError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A custom model was asked for its doubling ratio without one being supplied.
class RatioUnavailableError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The q_max divergence test could neither confirm convergence nor
/// divergence for a custom model.
class InconclusiveError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ellgd
