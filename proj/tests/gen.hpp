#pragma once

// Seeded generators for the property tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace slopelab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Sign times 10^u with u uniform in [lo10, hi10].
  double magnitude(double lo10, double hi10) {
    const double v = std::pow(10.0, uniform(lo10, hi10));
    return integer(0, 1) ? v : -v;
  }

  /// Modulus 10^u with u uniform in [lo10, hi10], argument uniform in (alo, ahi).
  std::complex<double> polar(double lo10, double hi10, double alo, double ahi) {
    return std::polar(std::pow(10.0, uniform(lo10, hi10)), uniform(alo, ahi));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace slopelab::testing
