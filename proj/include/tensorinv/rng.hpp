#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tensorinv {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Deterministic random source. All randomness in the toolkit flows through
/// this class so a whole run is reproducible from one root seed. Gaussian
/// variates use Box-Muller on raw mt19937_64 words; the standard library
/// distributions are avoided because their output sequences are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal. Two uniforms per draw, no cached spare.
  double gaussian() {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  /// Seed-splitting rule for independent subtask streams:
  ///   child_seed = splitmix64(parent_seed XOR splitmix64(index + 0x9E3779B97F4A7C15)).
  /// Children depend only on the parent seed and the index, never on how far
  /// the parent stream has advanced.
  Rng split(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x9E3779B97F4A7C15ull)));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

 private:
  static constexpr double kTwoPi = 6.28318530717958647692;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace tensorinv
