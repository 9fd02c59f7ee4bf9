#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dimer {

// SplitMix64 finalizer; used for seed mixing so that per-trial child seeds
// are independent of scheduling.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash64(uint64_t a, uint64_t b, uint64_t c = 0) {
  uint64_t h = splitmix64(a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// Thin deterministic wrapper around mt19937_64. All randomness in the library
// flows through this class; no global RNG anywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

  uint64_t next() { return eng_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased via rejection.
  int uniform_int(int n) {
    uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % uint64_t(n));
    uint64_t r;
    do {
      r = next();
    } while (r >= bound);
    return int(r % uint64_t(n));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Number of failures before the first success of a Bernoulli(p) sequence.
  long long skip_geometric(double p) {
    if (p >= 1.0) return 0;
    double u = uniform();
    // u == 0 would give +inf; nudge into (0,1).
    if (u <= 0.0) u = 0x1.0p-53;
    return static_cast<long long>(std::floor(std::log(u) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dimer
