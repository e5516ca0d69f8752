#pragma once

#include <cstdint>

namespace liftctl {

/// SplitMix64 (Steele, Lea, Flood 2014).  Counter-based: the i-th output
/// (0-based) of the stream seeded with s is mix(s + (i + 1) * 0x9E3779B97F4A7C15),
/// so any element can be computed directly and ports reproduce streams
/// bit-for-bit.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in the open interval (-bound, bound); endpoints are redrawn.
  double symmetric(double bound) {
    for (;;) {
      const double v = bound * (2.0 * uniform() - 1.0);
      if (v > -bound && v < bound) return v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace liftctl
