#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "cbn/error.hpp"

namespace cbn {

/// splitmix64 finalizer; stable across platforms, used to derive substream
/// seeds so that parallel generation is schedule-independent.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

/// Seeded random stream with bit-stable output: mt19937_64 underneath,
/// doubles and categorical draws produced by explicit arithmetic rather
/// than distribution objects, so results do not depend on the standard
/// library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Independent stream for one case of a batch keyed by (seed, index).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(hash_combine(seed, index));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index drawn according to the given (not necessarily normalized) weights.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw Error("categorical draw from all-zero weights");
    double u = uniform() * total;
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
      cum += weights[k];
      if (u < cum) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cbn
