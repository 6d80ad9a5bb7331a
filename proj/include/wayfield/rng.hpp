#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wayfield {

/// Seeded deterministic random stream. All draws go through explicit helpers
/// rather than std:: distributions, whose algorithms are
/// implementation-defined; a given (seed, call sequence) reproduces the same
/// values on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed = 1) : engine_(seed) {}

  /// Uniform double in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased.
  uint64_t below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Poisson draw by Knuth's product method. mean <= 0 returns 0 without
  /// consuming the stream.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double threshold = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > threshold);
    return k - 1;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace wayfield
