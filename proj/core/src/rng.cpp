#include "skewlab/rng.hpp"

namespace skewlab {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Counter4 philox_round(const Counter4& ctr, const Key2& key) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
  mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

Counter4 philox4x32(Counter4 counter, Key2 key) noexcept {
  counter = philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
    counter = philox_round(counter, key);
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream) {}

void CounterRng::refill() noexcept {
  const Counter4 ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(stream_),
                     static_cast<std::uint32_t>(stream_ >> 32)};
  buffer_ = philox4x32(ctr, key_from_seed(seed_));
  ++block_;
  used_ = 0;
}

std::uint32_t CounterRng::next_u32() noexcept {
  if (used_ == 4) refill();
  return buffer_[used_++];
}

CounterRng::result_type CounterRng::operator()() noexcept {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace skewlab
