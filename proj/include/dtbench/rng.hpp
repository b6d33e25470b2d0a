#pragma once

#include <cstdint>
#include <random>

namespace dtbench {

/// SplitMix64 finalizer. Used for seed derivation, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds `value` into `seed`; order-sensitive, so (a, b) and (b, a) differ.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(mix64(seed) ^ (value + 0x632be59bd9b4e019ULL));
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t value, Rest... rest) noexcept {
  return derive_seed(derive_seed(seed, value), static_cast<std::uint64_t>(rest)...);
}

/// Portable random stream: 64-bit Mersenne Twister (its output sequence is
/// fixed by the C++ standard) with our own bounded sampling, because the
/// standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection on the top of the range keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t r = engine_();
    while (r > limit) r = engine_();
    return r % bound;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dtbench
