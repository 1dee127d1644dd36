#pragma once

#include <cstddef>
#include <cstdint>

namespace lanczos {

/// SplitMix64. The exact output sequence is part
/// of the trace contract: a given seed must reproduce the same coin tosses
/// in any implementation.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform integer in [0, bound) by 128-bit multiply-shift; bound >= 1.
  constexpr std::size_t uniform_index(std::size_t bound) noexcept {
    const auto wide = static_cast<unsigned __int128>(next()) * bound;
    return static_cast<std::size_t>(wide >> 64);
  }

  /// Independent child stream number \p index of \p seed.
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix(seed + (index + 1) * kGamma));
  }

  [[nodiscard]] constexpr std::uint64_t state() const noexcept { return state_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace lanczos
