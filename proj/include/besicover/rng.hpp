#pragma once

#include <cstdint>
#include <random>

namespace besicover {

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// std::uniform_int_distribution is not, so bounded draws are done here by
// rejection sampling. Identical seeds give identical streams on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Uniform in [0, n), n >= 1. Rejection below the largest multiple of n.
  uint64_t below(uint64_t n) {
    const uint64_t span = (~uint64_t{0}) / n * n;
    uint64_t x;
    do {
      x = eng_();
    } while (span != 0 && x >= span);
    return x % n;
  }

  // Uniform in [lo, hi] inclusive.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 step, used to derive independent per-trial seeds from a master
// seed so trials can run in any order (or in parallel) reproducibly.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace besicover
