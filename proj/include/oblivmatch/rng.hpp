#pragma once

#include <cstdint>
#include <random>

namespace oblivmatch {

// SplitMix64 finalizer. Decorrelates consecutive integers into seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Fixed mixing rule deriving stream seeds from (master seed, index).
/// Parallel and serial trial execution use the same derivation, so thread
/// count never changes results.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Deterministic uniform stream. mt19937_64 is fully specified by the
/// standard and the [0,1) conversion avoids std::uniform_real_distribution,
/// whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace oblivmatch
