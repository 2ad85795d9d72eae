#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace pddlforge::gen {

/// Portable random source: std::mt19937_64 (its output sequence is fixed by the
/// standard) with hand-written derived draws, since the std distributions differ
/// between standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Stream for generation attempt `k` of a session seeded with `seed`:
  /// the engine is seeded with splitmix64(seed ^ splitmix64(k)).
  static Rng for_attempt(uint64_t seed, uint64_t k);

  uint64_t next() { return engine_(); }

  /// Uniform in [0, n) by rejection; n > 0.
  uint64_t below(uint64_t n);

  /// Uniform in [0, 1) with 53 random bits.
  double unit();

  bool bernoulli(double p) { return unit() < p; }

  /// Index drawn with probability proportional to `weights` (all positive).
  size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

uint64_t splitmix64(uint64_t x);

}  // namespace pddlforge::gen
