#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mrcl {

// Self-contained deterministic RNG. Standard-library distributions are
// implementation defined, which would break byte-identical outputs across
// toolchains, so sampling is spelled out here (splitmix64 seeding,
// xoshiro256** core, Box-Muller normals).

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via single-sample Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double sigma) { return sigma * normal(); }

  /// True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

// Stream domains keep independently consumed substreams from colliding.
enum class StreamDomain : std::uint64_t {
  kInit = 1,
  kSense = 2,
  kAttack = 3,
  kDropout = 4,
  kAttackSign = 5,
  kProcess = 6,
};

/// Derives an independent substream for (seed, domain, a, b). Hashing the tags
/// through splitmix64 makes draws invariant under iteration order.
inline Rng substream(std::uint64_t seed, StreamDomain domain, std::uint64_t a,
                     std::uint64_t b = 0) {
  std::uint64_t s = seed;
  s = splitmix64(s) ^ static_cast<std::uint64_t>(domain);
  s = splitmix64(s) ^ a;
  s = splitmix64(s) ^ b;
  return Rng(splitmix64(s));
}

}  // namespace mrcl
