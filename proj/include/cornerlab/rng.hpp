#pragma once

// Counter-based seeding. Every random quantity in the library is addressed by
// a tuple of integers (run seed, trial, entry row, entry column, ...) which is
// hashed into the key of an independent SplitMix64 stream. Nothing depends on
// the order in which streams are consumed, so results do not depend on the
// number of worker threads.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cornerlab {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive a child key from a parent key and a list of integer labels.
constexpr std::uint64_t derive_key(std::uint64_t parent,
                                   std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t key = mix64(parent + kGoldenGamma);
  for (std::uint64_t label : labels) {
    key = mix64(key ^ mix64(label + kGoldenGamma));
  }
  return key;
}

/// SplitMix64 stream: output n is mix64(key + n * gamma). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  explicit constexpr StreamEngine(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in the open interval (0, 1).
  constexpr double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Seed of trial `index` within a run seeded by `run_seed`.
constexpr std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t index) noexcept {
  return derive_key(run_seed, {0x5452494cULL, index});
}

}  // namespace cornerlab
