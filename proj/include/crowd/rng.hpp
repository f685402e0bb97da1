#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace crowd {

// splitmix64 finalizer; used to derive independent run seeds
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) { return mix64(h ^ mix64(v)); }

inline uint64_t double_bits(double x) {
  uint64_t b;
  static_assert(sizeof(b) == sizeof(x));
  __builtin_memcpy(&b, &x, sizeof(b));
  return b;
}

// mt19937_64 with hand-rolled distributions: the standard distribution objects
// are not pinned by the standard, these draws are reproducible everywhere
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}

  uint64_t bits() { return eng(); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // unbiased uniform integer in [0, n)
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = bits();
    } while (v >= limit);
    return v % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
};

}  // namespace crowd
