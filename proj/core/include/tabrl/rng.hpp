#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace tabrl {

/// Seeded random source with fully specified output.
///
/// std::mt19937_64 output is pinned by the standard, but the standard
/// distributions are not; every draw here is derived from raw engine words
/// so that a (seed, draw sequence) pair reproduces bit-for-bit on any
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (~un + 1) % un;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return static_cast<int>(x % un);
    }
  }

  /// Draws an index from a normalized probability vector by walking the
  /// cumulative sum. The final index absorbs any rounding slack.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  /// Standard normal via Box-Muller (deterministic given the seed).
  double normal() {
    for (;;) {
      const double u1 = uniform();
      const double u2 = uniform();
      if (u1 <= 0.0) continue;
      return std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tabrl
