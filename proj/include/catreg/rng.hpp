#pragma once

#include <cstdint>
#include <limits>

namespace catreg {

/// SplitMix64 generator, usable as a UniformRandomBitGenerator.
///
/// Streams: replicate k of a run seeded with `seed` draws from
/// `SplitMix64::stream(seed, k)`, whose state is a hash of (seed, k). A
/// replicate's draws therefore depend only on (seed, k), never on which thread
/// ran it or in which order.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += golden_gamma;
    return mix(state_);
  }

 private:
  static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

  // Stafford variant 13 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace catreg
