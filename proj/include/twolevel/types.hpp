#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <Eigen/Core>

namespace twolevel {

template <typename Scalar>
using Complex = std::complex<Scalar>;

// Errors ---------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: non-finite components, broken ordering, malformed documents.
class InputError : public Error {
public:
  using Error::Error;
};

/// An intermediate quantity left the representable range.
class ComputationError : public Error {
public:
  using Error::Error;
};

/// The Jacobi oracle ran out of sweeps. Carries the off-diagonal norm it reached.
class ConvergenceError : public Error {
public:
  ConvergenceError(double residual, int sweeps)
      : Error("jacobi did not converge after " + std::to_string(sweeps) +
              " sweeps, off-diagonal residual " + std::to_string(residual)),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

namespace detail {

template <typename Scalar>
void require_finite(Scalar x, const char* field) {
  if (!std::isfinite(x)) {
    throw InputError(std::string("non-finite value for ") + field);
  }
}

}  // namespace detail

// Comparison policy ----------------------------------------------------------

/// Equalities are tested as |x - y| <= max(abs, rel * scale).
template <typename Scalar>
class Tolerance {
public:
  static constexpr Scalar kDefaultRel = Scalar(1e-9);

  Tolerance() = default;
  Tolerance(Scalar rel, Scalar abs) : rel_(rel), abs_(abs) {
    if (!(rel > 0) || !std::isfinite(rel)) throw InputError("tol_rel must be finite and > 0");
    if (!(abs >= 0) || !std::isfinite(abs)) throw InputError("tol_abs must be finite and >= 0");
  }

  Scalar rel() const noexcept { return rel_; }
  Scalar abs() const noexcept { return abs_; }
  Scalar threshold(Scalar scale) const noexcept { return std::max(abs_, rel_ * scale); }

private:
  Scalar rel_ = kDefaultRel;
  Scalar abs_ = Scalar(0);
};

// Two-level domain types -----------------------------------------------------

/// The unperturbed close pair, E0_lower <= E0_upper.
///
/// Equality is allowed so that a degenerate starting system can be expressed.
template <typename Scalar>
class UnperturbedPair {
  static_assert(std::is_floating_point_v<Scalar>);

public:
  UnperturbedPair(Scalar lower, Scalar upper) : lower_(lower), upper_(upper) {
    detail::require_finite(lower, "e0_lower");
    detail::require_finite(upper, "e0_upper");
    if (upper < lower) throw InputError("e0_upper must be >= e0_lower");
    if (!std::isfinite(upper - lower)) throw InputError("e0_upper - e0_lower overflows");
  }

  Scalar lower() const noexcept { return lower_; }
  Scalar upper() const noexcept { return upper_; }
  Scalar gap() const noexcept { return upper_ - lower_; }
  bool degenerate() const noexcept { return upper_ == lower_; }

private:
  Scalar lower_;
  Scalar upper_;
};

/// Hermitian 2x2 perturbation. V21 is not stored; it is conj(V12).
template <typename Scalar>
class PerturbationBlock {
public:
  PerturbationBlock() = default;
  PerturbationBlock(Scalar v11, Scalar v22, Complex<Scalar> v12 = {})
      : v11_(v11), v22_(v22), v12_(v12) {
    detail::require_finite(v11, "v11");
    detail::require_finite(v22, "v22");
    detail::require_finite(v12.real(), "v12_re");
    detail::require_finite(v12.imag(), "v12_im");
  }

  Scalar v11() const noexcept { return v11_; }
  Scalar v22() const noexcept { return v22_; }
  Complex<Scalar> v12() const noexcept { return v12_; }
  Complex<Scalar> v21() const noexcept { return std::conj(v12_); }

  /// Largest component magnitude; the natural energy scale of the block.
  Scalar magnitude() const noexcept {
    return std::max({std::abs(v11_), std::abs(v22_), std::abs(v12_)});
  }

  friend PerturbationBlock operator*(Scalar t, const PerturbationBlock& v) {
    return {t * v.v11_, t * v.v22_, t * v.v12_};
  }
  friend PerturbationBlock operator-(const PerturbationBlock& v) { return Scalar(-1) * v; }
  friend bool operator==(const PerturbationBlock&, const PerturbationBlock&) = default;

private:
  Scalar v11_ = 0;
  Scalar v22_ = 0;
  Complex<Scalar> v12_{};
};

/// H11 = E0_1 + V11, H22 = E0_2 + V22, H12 = V12.
template <typename Scalar>
struct EffectiveHamiltonian {
  Scalar h11;
  Scalar h22;
  Complex<Scalar> h12;

  Eigen::Matrix<Complex<Scalar>, 2, 2> matrix() const {
    Eigen::Matrix<Complex<Scalar>, 2, 2> m;
    m << Complex<Scalar>(h11), h12, std::conj(h12), Complex<Scalar>(h22);
    return m;
  }

  Scalar magnitude() const noexcept {
    return std::max({std::abs(h11), std::abs(h22), std::abs(h12)});
  }
};

/// |psi1> = a|1> + b|2>, |psi2> = c|1> + d|2>.
///
/// Phase convention: a (resp. c) is real and non-negative; when it vanishes
/// b (resp. d) is real and positive.
template <typename Scalar>
struct MixingCoefficients {
  Complex<Scalar> a{1};
  Complex<Scalar> b{0};
  Complex<Scalar> c{0};
  Complex<Scalar> d{1};

  Eigen::Matrix<Complex<Scalar>, 2, 1> lower() const { return {a, b}; }
  Eigen::Matrix<Complex<Scalar>, 2, 1> upper() const { return {c, d}; }
};

template <typename Scalar>
struct PerturbedPair {
  Scalar e1;
  Scalar e2;
  Scalar gap;
  MixingCoefficients<Scalar> mixing;
};

// Indicator energy -----------------------------------------------------------

/// V11 = V22 with V12 != 0: the indicator diverges.
struct Unbounded {
  friend bool operator==(Unbounded, Unbounded) = default;
};

/// V11 = V22 with V12 = 0: the 0/0 point, i.e. no perturbation of the gap.
struct NullCase {
  friend bool operator==(NullCase, NullCase) = default;
};

template <typename Scalar>
using Epsilon = std::variant<Scalar, Unbounded, NullCase>;

enum class LevelCase { Repulsion, Rapprochement, Unchanged, Superimposition };

inline constexpr LevelCase kAllLevelCases[] = {LevelCase::Repulsion, LevelCase::Rapprochement,
                                               LevelCase::Unchanged, LevelCase::Superimposition};

template <typename Scalar>
struct IndicatorResult {
  Epsilon<Scalar> epsilon;
  LevelCase level_case;
};

inline std::string_view to_string(LevelCase c) {
  switch (c) {
    case LevelCase::Repulsion: return "repulsion";
    case LevelCase::Rapprochement: return "rapprochement";
    case LevelCase::Unchanged: return "unchanged";
    case LevelCase::Superimposition: return "superimposition";
  }
  return "unknown";
}

inline LevelCase parse_level_case(std::string_view label) {
  for (LevelCase c : kAllLevelCases) {
    if (to_string(c) == label) return c;
  }
  throw InputError("unknown case label '" + std::string(label) + "'");
}

template <typename Scalar>
bool is_finite(const Epsilon<Scalar>& eps) {
  return std::holds_alternative<Scalar>(eps);
}

}  // namespace twolevel
