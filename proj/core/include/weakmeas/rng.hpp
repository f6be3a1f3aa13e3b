#pragma once

#include <cstdint>
#include <limits>

namespace weakmeas {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic per-trial random stream.
///
/// Trial `i` of an experiment seeded with `seed` starts from state
/// `seed ^ mix64(i + 1)`; each draw advances the state by the golden
/// gamma 0x9E3779B97F4A7C15 and returns `mix64(state)`. Uniform doubles take
/// the top 53 bits: `(next() >> 11) * 2^-53`. The scheme is fully specified so
/// logs can be cross-checked by independent implementations.
class TrialStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr TrialStream(std::uint64_t state) noexcept : state_(state) {}

  static constexpr TrialStream for_trial(std::uint64_t seed, std::uint64_t trial) noexcept {
    return TrialStream(seed ^ mix64(trial + 1));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1).
  double uniform() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace weakmeas
