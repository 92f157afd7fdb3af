#pragma once

#include <cstdint>

namespace spge {

/// SplitMix64: the state is a 64-bit counter advanced by the odd constant
/// 0x9E3779B97F4A7C15 and each output is a fixed bijective mix of the
/// counter. Every derived draw below is defined in terms of next_u64() with
/// plain IEEE arithmetic, so instances are reproducible across platforms
/// and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n) by rejection on the top bits.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal by the basic Box-Muller transform; one pair of uniforms
  /// per call, the sine branch discarded.
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace spge
