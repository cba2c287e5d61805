#pragma once

#include <cstdint>
#include <limits>

namespace sgotto::rng {

/// SplitMix64 finalizer. Bijective avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for stream `index` of family `stream` under `master`. Pure function, so
/// realization r of size n gets the same seed whichever thread samples it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept;

/// Counter-based SplitMix64 generator: output k is mix64(seed + (k+1)*gamma).
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Standard normal deviates by Box-Muller. std::normal_distribution is
/// implementation-defined, which would break bit-exact regeneration across
/// standard libraries.
class StandardNormal {
 public:
  explicit StandardNormal(std::uint64_t seed) noexcept : engine_(seed) {}

  double operator()() noexcept;

 private:
  SplitMix64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sgotto::rng
