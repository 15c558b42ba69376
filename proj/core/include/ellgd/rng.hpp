#pragma once

#include <cmath>
#include <cstdint>

namespace ellgd {

/// Counter-based generator: output i of stream `seed` is
/// splitmix64(seed, i). The (seed, counter) pair fully determines every
/// draw, so sequences reproduce bit-identically across platforms and the
/// state can be cloned or forked cheaply. Gaussian draws use Box-Muller
/// and consume exactly two counter slots each.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1].
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double next_in(double lo, double hi) {
    return lo + (hi - lo) * (next_unit() - 0x1.0p-53);
  }

  /// Standard normal via Box-Muller.
  double next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace ellgd
