#include "pddlforge/gen/rng.hpp"

#include <numeric>

#include "pddlforge/error.hpp"

namespace pddlforge::gen {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::for_attempt(uint64_t seed, uint64_t k) { return Rng(splitmix64(seed ^ splitmix64(k))); }

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  // 2^64 mod n; draws below it would bias the modulo
  uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

size_t Rng::categorical(std::span<const double> weights) {
  if (weights.empty()) throw Error("categorical draw over no weights");
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = unit() * total;
  for (size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

}  // namespace pddlforge::gen
