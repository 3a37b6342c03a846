#pragma once

// Degeneracy restoration: a perturbation V lifts the degeneracy of H0, and the
// counter-perturbation -kV applied to H0 + V returns the system to H0 as k -> 1.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "twolevel/spectral_core.hpp"
#include "twolevel/types.hpp"

namespace twolevel {

template <typename Scalar>
std::vector<Scalar> uniform_k_grid(std::size_t points = 101) {
  if (points < 2) throw InputError("k grid needs at least 2 points");
  std::vector<Scalar> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<Scalar>(i) / static_cast<Scalar>(points - 1);
  }
  return grid;
}

template <typename Scalar>
struct SweepConfig {
  UnperturbedPair<Scalar> base;
  PerturbationBlock<Scalar> v;
  std::vector<Scalar> k_grid = uniform_k_grid<Scalar>();
};

template <typename Scalar>
struct SweepPoint {
  Scalar k;
  Scalar gap;
  Scalar e1;
  Scalar e2;
  LevelCase level_case;
};

template <typename Scalar>
void validate(const SweepConfig<Scalar>& cfg) {
  if (cfg.k_grid.empty()) throw InputError("k grid is empty");
  for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
    const Scalar k = cfg.k_grid[i];
    if (!(k >= 0 && k <= 1)) throw InputError("k must lie in [0, 1]");
    if (i > 0 && !(k > cfg.k_grid[i - 1])) throw InputError("k grid must be strictly ascending");
  }
}

/// Two-level solution of H0 + (1 - k) V at every grid point, in grid order.
///
/// (H0 + V) - kV is evaluated as H0 + (1 - k) V so that k = 1 reproduces H0 exactly.
template <typename Scalar>
std::vector<SweepPoint<Scalar>> degeneracy_restoration_sweep(const SweepConfig<Scalar>& cfg,
                                                             const Tolerance<Scalar>& tol = {}) {
  validate(cfg);
  std::vector<SweepPoint<Scalar>> out;
  out.reserve(cfg.k_grid.size());
  for (const Scalar k : cfg.k_grid) {
    const PerturbationBlock<Scalar> remaining = (1 - k) * cfg.v;
    const auto solved = solve_two_level(effective_hamiltonian(cfg.base, remaining));
    out.push_back({k, solved.gap, solved.e1, solved.e2,
                   classify_by_indicator(cfg.base, remaining, tol).level_case});
  }
  return out;
}

template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> gap_profile(const SweepConfig<Scalar>& cfg) {
  std::vector<std::pair<Scalar, Scalar>> out;
  for (const auto& point : degeneracy_restoration_sweep(cfg)) out.emplace_back(point.k, point.gap);
  return out;
}

}  // namespace twolevel
