#pragma once

// Deterministic random source for the simulator. splitmix64 keeps the stream
// independent of the platform's standard-library distributions, so a fixed
// seed reproduces byte-identical runs everywhere.

#include <cstdint>

#include "pipbound/rational.hpp"

namespace pipbound {

struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw from [0, n).
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t u;
    do {
      u = next();
    } while (u >= lim);
    return u % n;
  }

  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  // Exact Bernoulli(p): draw u in [0, 2^64), accept iff u/2^64 < p.
  bool bernoulli(const Rational& p) {
    if (p >= 1) return true;
    if (p <= 0) return false;
    uint64_t u = next();
    return Int(u) * rat_den(p) < (rat_num(p) << 64);
  }
};

// Stream splitter for per-trial seeding.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  Rng r(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  r.next();
  return r.next();
}

}  // namespace pipbound
