#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Reproducible random number generation. Every randomized computation in
// this library draws from an explicitly seeded stream, and parallel loops
// derive one independent stream per work item (bootstrap replicate,
// simulation replication) from a master seed. Results are therefore
// independent of thread count and scheduling, and replicates 1..B form a
// prefix of replicates 1..B' for B' > B.
//
// The samplers below are implemented here rather than taken from
// <random> so that output sequences do not depend on the standard
// library implementation.

namespace ciftest {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer. Used for seed mixing and state expansion.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derive the seed of an independent substream from a base seed and a
// purpose tag. Chain the two-argument form for indexed substreams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(base + golden_gamma * (tag + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t index) {
  return derive_seed(derive_seed(base, tag), index);
}

// FNV-1a hash, used to turn canonical identifiers (e.g. a simulation
// cell id) into stable seed tags.
inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// xoshiro256++ by Blackman and Vigna. State is expanded from a 64-bit
// seed with SplitMix64.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += golden_gamma;
      word = mix64(z);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    double v1, v2, s;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    return v1 * std::sqrt(-2.0 * std::log(s) / s);
  }

  // Poisson with unit mean (Knuth's multiplication method; cheap at
  // this rate).
  int poisson_unit() {
    static const double limit = std::exp(-1.0);
    int k = 0;
    double prod = uniform_pos();
    while (prod > limit) {
      prod *= uniform_pos();
      ++k;
    }
    return k;
  }

  // +1 or -1 with equal probability.
  double rademacher() { return (next() >> 63) ? 1.0 : -1.0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace ciftest
