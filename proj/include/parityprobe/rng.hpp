#pragma once

#include "parityprobe/types.hpp"

#include <cstdint>
#include <random>

namespace parityprobe {

/// splitmix64 finalizer; stateless mixing of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the value at (seed, index) is independent of how
/// many values were drawn before, so per-shot draws are reproducible under
/// any work partitioning.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t index) const {
    return splitmix64(splitmix64(seed_) ^ index);
  }

  /// Uniform double in [0, 1) at the given counter.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

/// Sequential engine for optimizer restarts and dataset sampling; each
/// consumer derives its own stream from (seed, stream id).
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ stream));
}

/// Haar-random pure state of the given dimension.
Vector haar_state(Index dim, std::mt19937_64& gen);

/// Haar-random unitary via QR of a Ginibre matrix.
Matrix haar_unitary(Index dim, std::mt19937_64& gen);

}  // namespace parityprobe
