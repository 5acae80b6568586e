#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gmeopt/errors.hpp"

namespace gmeopt {

// Deterministic random source with all distributions implemented in-house,
// so a given seed produces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::acos(-1.0) * u2);
  }

  // Poisson draw: inversion by sequential search for small means, normal
  // approximation with rejection of negatives above mean 30.
  long poisson(double mean) {
    if (!(mean > 0)) throw InputError("poisson: mean must be positive");
    if (mean <= 30.0) {
      const double u = uniform01();
      double p = std::exp(-mean);
      double cum = p;
      long k = 0;
      const long cap = static_cast<long>(mean + 20.0 * std::sqrt(mean) + 50.0);
      while (u > cum && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
      }
      return k;
    }
    const double sd = std::sqrt(mean);
    for (;;) {
      const double x = std::floor(mean + sd * normal() + 0.5);
      if (x >= 0.0) return static_cast<long>(x);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gmeopt
