#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace lexplain {

// Seeded generator with platform-independent output.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard. The
// standard distributions are implementation-defined, so the bounded integer
// and unit-interval draws are implemented here: uniform_index rejects the
// biased tail of the 64-bit range, and uniform01 takes the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n) by rejection then modulo. n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lexplain
