#pragma once

#include <cstdint>
#include <vector>

namespace cst {

// Deterministic splitmix64 generator. Every random draw in the project goes
// through this class so that runs are bit-reproducible across platforms;
// std:: distributions are avoided because their output is not pinned by the
// standard.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Independent stream derived from (seed, tag). Streams with different tags
  // never share state, so optional components can consume randomness without
  // shifting the draws of other components.
  static Rng stream(uint64_t seed, uint64_t tag) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    r.next_u64();
    r.next_u64();
    return r;
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased uniform in [0, bound). bound must be > 0.
  uint64_t next_below(uint64_t bound) {
    uint64_t x, r;
    do {
      x = next_u64();
      r = x % bound;
    } while (x - r > UINT64_MAX - (bound - 1));
    return r;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-limit, limit).
  double next_symmetric(double limit) { return (2.0 * next_double() - 1.0) * limit; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace cst
