#pragma once

#include <cstdint>
#include <random>

namespace scp {

/// Seeded PRNG with a portable output sequence. std::mt19937_64's raw
/// stream is fixed by the standard; the distributions below avoid the
/// implementation-defined std::*_distribution algorithms so a seed gives
/// the same result with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n), n > 0, by rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  bool bit() { return (engine_() >> 63) != 0; }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scp
