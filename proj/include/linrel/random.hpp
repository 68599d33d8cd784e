#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "linrel/kernel.hpp"

namespace linrel {

/// splitmix64 finalizer; used to derive independent seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with portable conversions: the engine's output sequence is
/// fixed by the standard, and the float conversions below are done by hand
/// because the std distributions are implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  /// Matrix of independent standard complex Gaussians (E|z|^2 = 1).
  ComplexMatrix gaussian(Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        const double re = normal();
        const double im = normal();
        m(i, j) = Complex(re, im) * std::sqrt(0.5);
      }
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace linrel
