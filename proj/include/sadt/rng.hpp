#pragma once
#include <cstdint>
#include <cstddef>

namespace sadt {

// splitmix64: tiny, well-mixed, and — unlike the standard <random>
// distributions — produces the same stream on every platform and standard
// library, which the byte-identical-output guarantees depend on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform over {0, ..., m-1}; m is tiny here, so modulo bias is negligible
  // relative to the 64-bit state but we reject to keep streams exact anyway.
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t limit = m * (UINT64_MAX / m);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % m;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sadt
