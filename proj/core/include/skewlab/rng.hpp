#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace skewlab {

using Counter4 = std::array<std::uint32_t, 4>;
using Key2 = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function. All random draws in the library come from
/// it, keyed by seed and indexed by sample.
Counter4 philox4x32(Counter4 counter, Key2 key) noexcept;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replicate `index` of a run with `master` seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Sequential view over a Philox stream: counter = (position, stream).
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// 32 fresh bits.
  std::uint32_t next_u32() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Counter4 buffer_{};
  unsigned used_ = 4;  // words of buffer_ already consumed
};

inline Key2 key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace skewlab
