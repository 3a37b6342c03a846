#pragma once

// Exact spectrum of two close levels under a Hermitian perturbation, the
// indicator energy of the pair, and the four-way classification of how the
// perturbation moves the levels.

#include <cmath>
#include <string>

#include "twolevel/types.hpp"

namespace twolevel {

template <typename Scalar>
EffectiveHamiltonian<Scalar> effective_hamiltonian(const UnperturbedPair<Scalar>& pair,
                                                   const PerturbationBlock<Scalar>& v) {
  return {pair.lower() + v.v11(), pair.upper() + v.v22(), v.v12()};
}

/// Energy scale used by every tolerance comparison on (pair, v).
template <typename Scalar>
Scalar comparison_scale(const UnperturbedPair<Scalar>& pair, const PerturbationBlock<Scalar>& v) {
  return std::max(pair.gap(), v.magnitude());
}

namespace detail {

template <typename Scalar>
Scalar require_computed(Scalar x, const char* field) {
  if (!std::isfinite(x)) throw ComputationError(std::string("non-finite intermediate ") + field);
  return x;
}

}  // namespace detail

/// Roots of the 2x2 secular determinant with their zero-order states.
///
/// The minus root is E1. With h11 <= h22 at zero perturbation this is the root
/// that tends to E0_lower as V -> 0, so no explicit limit is taken. A scalar
/// (fully degenerate) Hamiltonian returns the identity mixing.
template <typename Scalar>
PerturbedPair<Scalar> solve_two_level(const EffectiveHamiltonian<Scalar>& h) {
  using C = Complex<Scalar>;
  const Scalar half_trace = detail::require_computed((h.h11 + h.h22) / 2, "h11 + h22");
  const Scalar splitting = detail::require_computed(h.h22 - h.h11, "h22 - h11");
  const Scalar coupling = std::abs(h.h12);
  const Scalar gap = detail::require_computed(std::hypot(splitting, 2 * coupling), "gap");

  PerturbedPair<Scalar> out{half_trace - gap / 2, half_trace + gap / 2, gap, {}};

  if (coupling == 0) {
    // Already diagonal: the levels are the diagonal entries themselves. If the
    // diagonal is inverted, |2> is the lower state.
    out.e1 = std::min(h.h11, h.h22);
    out.e2 = std::max(h.h11, h.h22);
    if (h.h11 > h.h22) out.mixing = {C(0), C(1), C(1), C(0)};
    return out;
  }

  // Rotation angle of the pivot block, theta in (0, pi/2).
  const Scalar theta = std::atan2(2 * coupling, splitting) / 2;
  const Scalar cos_t = std::cos(theta);
  const Scalar sin_t = std::sin(theta);
  const C phase = std::conj(h.h12) / coupling;

  out.mixing.a = C(cos_t);
  out.mixing.b = -phase * sin_t;
  out.mixing.c = C(sin_t);
  out.mixing.d = phase * cos_t;
  return out;
}

/// Perturbed level spacing evaluated directly from the perturbation.
template <typename Scalar>
Scalar perturbed_gap(const UnperturbedPair<Scalar>& pair, const PerturbationBlock<Scalar>& v) {
  const Scalar shifted = v.v22() - v.v11() + pair.gap();
  return detail::require_computed(std::hypot(shifted, 2 * std::abs(v.v12())), "gap");
}

/// Indicator energy with an explicit comparison threshold for V11 = V22 and V12 = 0.
template <typename Scalar>
Epsilon<Scalar> indicator_energy(const PerturbationBlock<Scalar>& v, Scalar threshold) {
  const Scalar diag = v.v11() - v.v22();
  if (std::abs(diag) > threshold) {
    return (diag * diag + 4 * std::norm(v.v12())) / (2 * diag);
  }
  if (std::abs(v.v12()) > threshold) return Unbounded{};
  return NullCase{};
}

template <typename Scalar>
Epsilon<Scalar> indicator_energy(const PerturbationBlock<Scalar>& v,
                                 const Tolerance<Scalar>& tol = {}) {
  return indicator_energy(v, tol.threshold(v.magnitude()));
}

/// Classification from the position of epsilon relative to (0, gap0).
template <typename Scalar>
IndicatorResult<Scalar> classify_by_indicator(const UnperturbedPair<Scalar>& pair,
                                              const PerturbationBlock<Scalar>& v,
                                              const Tolerance<Scalar>& tol = {}) {
  const Scalar thr = tol.threshold(comparison_scale(pair, v));
  const Scalar gap0 = pair.gap();
  const Epsilon<Scalar> eps = indicator_energy(v, thr);

  if (std::holds_alternative<NullCase>(eps)) return {eps, LevelCase::Unchanged};
  if (std::holds_alternative<Unbounded>(eps)) return {eps, LevelCase::Repulsion};

  const Scalar e = std::get<Scalar>(eps);
  const bool superimposed = std::abs(e - gap0 / 2) <= thr && std::abs(v.v12()) <= thr &&
                            gap0 > thr && perturbed_gap(pair, v) <= thr;
  if (superimposed) return {eps, LevelCase::Superimposition};
  if (std::abs(e) <= thr || std::abs(e - gap0) <= thr) return {eps, LevelCase::Unchanged};
  if (e < 0 || e > gap0) return {eps, LevelCase::Repulsion};
  return {eps, LevelCase::Rapprochement};
}

/// Classification by comparing the perturbed gap with the unperturbed one.
template <typename Scalar>
LevelCase classify_by_gap(const UnperturbedPair<Scalar>& pair, const PerturbationBlock<Scalar>& v,
                          const Tolerance<Scalar>& tol = {}) {
  const Scalar thr = tol.threshold(comparison_scale(pair, v));
  const Scalar gap0 = pair.gap();
  const Scalar gap = perturbed_gap(pair, v);

  if (gap <= thr && gap0 > thr) return LevelCase::Superimposition;
  if (std::abs(gap - gap0) <= thr) return LevelCase::Unchanged;
  return gap > gap0 ? LevelCase::Repulsion : LevelCase::Rapprochement;
}

}  // namespace twolevel
