#pragma once

// Seeded census of level behaviour over Gaussian random perturbations.

#include <array>
#include <cstdint>

#include "twolevel/types.hpp"

namespace twolevel {

struct EnsembleSpec {
  UnperturbedPair<double> pair{0.0, 1.0};
  double sigma = 0.5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  Tolerance<double> tol{};
};

void validate(const EnsembleSpec& spec);

/// Sample `index` of the ensemble: V11, V22 ~ N(0, sigma^2) and the real and
/// imaginary parts of V12 ~ N(0, sigma^2 / 2).
///
/// The draw depends only on (seed, index). Four uniforms come from a SplitMix64
/// counter stream keyed by (seed, index) and feed two Box-Muller transforms.
PerturbationBlock<double> sample_perturbation(const EnsembleSpec& spec, std::uint64_t index);

struct CaseFrequencies {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t total = 0;
  std::array<double, 4> frequencies{};

  std::uint64_t count(LevelCase c) const { return counts[static_cast<std::size_t>(c)]; }
  double frequency(LevelCase c) const { return frequencies[static_cast<std::size_t>(c)]; }

  friend bool operator==(const CaseFrequencies&, const CaseFrequencies&) = default;
};

/// Classifies every sample by its indicator energy. `threads` only splits the
/// index range; the result does not depend on it.
CaseFrequencies case_census(const EnsembleSpec& spec, unsigned threads = 1);

}  // namespace twolevel
