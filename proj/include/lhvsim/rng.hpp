#pragma once

#include <bit>
#include <cstdint>
#include <limits>

namespace lhvsim {

/// SplitMix64 finalizer. Used for seeding and for keyed hashing.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maps 64 random bits to a double in [0, 1) with 53 bits of resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// xoshiro256** generator.
///
/// Every random stream in the library is addressed by a (seed, stream id)
/// pair, so a stream can be rebuilt on any thread without touching shared
/// state. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    std::uint64_t x = mix64(seed) ^ mix64(stream ^ 0x6a09e667f3bcc909ULL);
    for (auto& word : state_) {
      x = mix64(x);
      word = x;
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

 private:
  std::uint64_t state_[4];
};

/// Stream ids reserved for the different consumers of a master seed.
namespace streams {
inline constexpr std::uint64_t kGridA = 1;
inline constexpr std::uint64_t kGridB = 2;
inline constexpr std::uint64_t kShots = 3;
inline constexpr std::uint64_t kModel = 4;
/// Per-lambda substreams start here; lambda k uses kLambdaBase + k.
inline constexpr std::uint64_t kLambdaBase = 1ULL << 32;
}  // namespace streams

}  // namespace lhvsim
