#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace wsbm {

// SplitMix64 finalizer (Steele, Lea & Flood; constants from Vigna's
// splitmix64.c). Bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key of an independent substream, from the 128-bit input (seed, index):
// both words pass through the finalizer, so edge streams and trial streams
// depend only on their own index, never on generation order or thread count.
constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                      std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

// Counter-based generator: value i of the stream keyed k is
// mix64(k + i * gamma), i.e. SplitMix64 started at state k. No shared
// state, so any number of streams can be drawn from concurrently.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, std::uint64_t index)
      : key_(derive_stream(seed, index)) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + counter_++ * kGamma); }

  // uniform on [0,1), 53 random bits
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller; the paired value is cached
  double next_gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wsbm
