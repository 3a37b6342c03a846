#pragma once

// Random inputs for property tests. Deliberately independent of the library's
// own ensemble sampler.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "twolevel/types.hpp"

namespace twolevel::testing {

class BlockGenerator {
public:
  explicit BlockGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  PerturbationBlock<double> block(double range = 1.0) {
    return {uniform(-range, range), uniform(-range, range),
            {uniform(-range, range), uniform(-range, range)}};
  }

  UnperturbedPair<double> pair() {
    const double lower = uniform(-2.0, 2.0);
    return {lower, lower + uniform(0.01, 2.0)};
  }

  std::complex<double> unit_phase() { return std::polar(1.0, uniform(0.0, 6.283185307179586)); }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline bool close_rel(double x, double y, double scale, double rel) {
  return std::abs(x - y) <= rel * std::max(scale, 1e-300);
}

}  // namespace twolevel::testing
