#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "error.hpp"

namespace bbcirl {

// mt19937_64 plus hand-rolled draw helpers. The standard distribution
// adapters are implementation-defined, so every draw here is pinned by this
// code: identical seeds give identical streams on any conforming stdlib.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0,n), rejection sampling on a power-of-two mask.
  std::size_t index(std::size_t n) {
    if (n == 0) throw UsageError("Rng::index: n must be positive");
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = gen_() & mask;
      if (v < n) return static_cast<std::size_t>(v);
    }
  }

  // Draws an index from a probability vector by inverse CDF. The vector is
  // assumed normalized; trailing mass from rounding goes to the last entry.
  int categorical(std::span<const double> probs) {
    double u = uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bbcirl
