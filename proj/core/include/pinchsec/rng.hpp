#pragma once

#include <cstdint>
#include <random>

namespace pinchsec {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from
/// (seed, trial, method) tuples.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return splitmix64(seed ^ splitmix64(salt));
}

/// Seedable generator with platform-independent real draws.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// built directly from the top 53 bits of mt19937_64 output. This keeps
/// experiment CSVs byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool operator==(const Rng& other) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace pinchsec
