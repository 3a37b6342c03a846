#pragma once

// Brute-force Hermitian eigensolver (cyclic Jacobi with complex rotations) and
// the embedding of a close pair among far spectator levels.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "twolevel/spectral_core.hpp"
#include "twolevel/types.hpp"

namespace twolevel {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Square complex matrix equal to its conjugate transpose.
///
/// Entries must agree with their mirror to 1e-14; the stored matrix is the
/// exact Hermitian part, with real diagonal.
template <typename Scalar>
class HermitianMatrix {
public:
  static constexpr Scalar kHermiticityTolerance = Scalar(1e-14);

  explicit HermitianMatrix(const ComplexMatrix<Scalar>& entries) {
    if (entries.rows() < 1 || entries.rows() != entries.cols()) {
      throw InputError("hermitian matrix must be square with dimension >= 1");
    }
    if (!entries.allFinite()) throw InputError("hermitian matrix has non-finite entries");
    const Eigen::Index n = entries.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = j; k < n; ++k) {
        if (std::abs(entries(j, k) - std::conj(entries(k, j))) > kHermiticityTolerance) {
          throw InputError("matrix is not hermitian");
        }
      }
    }
    entries_ = (entries + entries.adjoint()) / Scalar(2);
    for (Eigen::Index j = 0; j < n; ++j) entries_(j, j) = entries_(j, j).real();
  }

  static HermitianMatrix from(const EffectiveHamiltonian<Scalar>& h) {
    return HermitianMatrix(ComplexMatrix<Scalar>(h.matrix()));
  }

  Eigen::Index size() const noexcept { return entries_.rows(); }
  Complex<Scalar> operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }
  const ComplexMatrix<Scalar>& matrix() const noexcept { return entries_; }

private:
  ComplexMatrix<Scalar> entries_;
};

template <typename Scalar>
struct Spectrum {
  RealVector<Scalar> eigenvalues;  // ascending
  Scalar residual = 0;             // off-diagonal Frobenius norm at exit
  int sweeps = 0;
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const ComplexMatrix<Scalar>& a) {
  Scalar sum = 0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (j != k) sum += std::norm(a(j, k));
    }
  }
  return std::sqrt(sum);
}

// Zeroes a(p, q) with the unitary J whose columns p, q are
//   (cos t, -w sin t) and (sin t, w cos t),  w = conj(a_pq) / |a_pq|,
// and replaces a with J^H a J.
template <typename Scalar>
void rotate(ComplexMatrix<Scalar>& a, Eigen::Index p, Eigen::Index q) {
  using C = Complex<Scalar>;
  const C apq = a(p, q);
  const Scalar beta = std::abs(apq);
  if (beta == 0) return;

  const Scalar theta = std::atan2(2 * beta, a(q, q).real() - a(p, p).real()) / 2;
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  const C w = std::conj(apq) / beta;

  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const C akp = a(k, p);
    const C akq = a(k, q);
    a(k, p) = c * akp - s * w * akq;
    a(k, q) = s * akp + c * w * akq;
  }
  const C wc = std::conj(w);
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const C apk = a(p, k);
    const C aqk = a(q, k);
    a(p, k) = c * apk - s * wc * aqk;
    a(q, k) = s * apk + c * wc * aqk;
  }
  a(p, q) = C(0);
  a(q, p) = C(0);
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace detail

/// Eigenvalues by cyclic-by-rows Jacobi sweeps until the off-diagonal
/// Frobenius norm drops to `threshold`.
template <typename Scalar>
Spectrum<Scalar> jacobi_diagonalize(const HermitianMatrix<Scalar>& m, Scalar threshold,
                                    int max_sweeps = 100) {
  if (!(threshold > 0) || !std::isfinite(threshold)) {
    throw InputError("jacobi threshold must be finite and > 0");
  }
  if (max_sweeps < 1) throw InputError("jacobi max_sweeps must be >= 1");

  ComplexMatrix<Scalar> a = m.matrix();
  const Eigen::Index n = a.rows();
  Spectrum<Scalar> out;
  out.residual = detail::off_diagonal_norm(a);
  while (out.residual > threshold) {
    if (out.sweeps == max_sweeps) {
      throw ConvergenceError(static_cast<double>(out.residual), out.sweeps);
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) detail::rotate(a, p, q);
    }
    ++out.sweeps;
    out.residual = detail::off_diagonal_norm(a);
  }

  out.eigenvalues = a.diagonal().real();
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

/// Default threshold: 1e-13 times the Frobenius norm of the input.
template <typename Scalar>
Spectrum<Scalar> jacobi_diagonalize(const HermitianMatrix<Scalar>& m) {
  const Scalar norm = m.matrix().norm();
  if (norm == 0) return {RealVector<Scalar>::Zero(m.size()), Scalar(0), 0};
  return jacobi_diagonalize(m, Scalar(1e-13) * norm);
}

// Embedding ------------------------------------------------------------------

/// A close pair coupled with strength `coupling` to each spectator level.
template <typename Scalar>
struct EmbeddingSpec {
  UnperturbedPair<Scalar> pair;
  PerturbationBlock<Scalar> v;
  std::vector<Scalar> spectators;
  Scalar coupling = 0;
};

template <typename Scalar>
void validate(const EmbeddingSpec<Scalar>& spec) {
  if (!std::isfinite(spec.coupling) || spec.coupling < 0) {
    throw InputError("coupling must be finite and >= 0");
  }
  const Scalar gap0 = spec.pair.gap();
  for (const Scalar s : spec.spectators) {
    detail::require_finite(s, "spectator");
    if (std::abs(s - spec.pair.lower()) <= gap0 || std::abs(s - spec.pair.upper()) <= gap0) {
      throw InputError("spectator level is not farther from the pair than the pair gap");
    }
  }
}

/// (2+s)x(2+s) Hamiltonian: the effective 2x2 block in the upper-left corner,
/// spectators on the remaining diagonal, real coupling between pair and spectators.
template <typename Scalar>
HermitianMatrix<Scalar> embed_pair(const EmbeddingSpec<Scalar>& spec) {
  validate(spec);
  const auto h = effective_hamiltonian(spec.pair, spec.v);
  const Eigen::Index n = 2 + static_cast<Eigen::Index>(spec.spectators.size());

  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(n, n);
  m.template topLeftCorner<2, 2>() = h.matrix();
  for (Eigen::Index j = 2; j < n; ++j) {
    m(j, j) = spec.spectators[static_cast<std::size_t>(j - 2)];
    for (Eigen::Index k = 0; k < 2; ++k) {
      m(j, k) = spec.coupling;
      m(k, j) = spec.coupling;
    }
  }
  return HermitianMatrix<Scalar>(m);
}

template <typename Scalar>
struct ValidityPoint {
  Scalar scale;
  Scalar max_error;
};

/// Distance between the embedded spectrum and the bare two-level spectrum as
/// the spectators are pushed away from the pair.
///
/// At each scale the spectator offsets from the pair midpoint are multiplied by
/// the scale. The bare pair is solved by the same oracle, so decoupled
/// spectators (coupling 0) report exactly zero. Each bare level is matched to
/// the nearest unused embedded eigenvalue.
template <typename Scalar>
std::vector<ValidityPoint<Scalar>> validity_scan(const UnperturbedPair<Scalar>& pair,
                                                 const PerturbationBlock<Scalar>& v,
                                                 const std::vector<Scalar>& base_spectators,
                                                 Scalar coupling,
                                                 const std::vector<Scalar>& scales) {
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!std::isfinite(scales[i]) || !(scales[i] > 0)) {
      throw InputError("scales must be finite and > 0");
    }
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      throw InputError("scales must be strictly ascending");
    }
  }

  const auto bare = jacobi_diagonalize(embed_pair(EmbeddingSpec<Scalar>{pair, v, {}, Scalar(0)}));
  const Scalar mid = pair.lower() / 2 + pair.upper() / 2;

  std::vector<ValidityPoint<Scalar>> out;
  out.reserve(scales.size());
  for (const Scalar scale : scales) {
    std::vector<Scalar> spectators;
    spectators.reserve(base_spectators.size());
    for (const Scalar s : base_spectators) spectators.push_back(mid + scale * (s - mid));

    const auto full = jacobi_diagonalize(embed_pair(EmbeddingSpec<Scalar>{pair, v, spectators, coupling}));

    std::vector<bool> used(static_cast<std::size_t>(full.eigenvalues.size()), false);
    Scalar max_error = 0;
    for (const Scalar predicted : bare.eigenvalues) {
      std::optional<std::size_t> best;
      for (std::size_t j = 0; j < used.size(); ++j) {
        if (used[j]) continue;
        const auto jj = static_cast<Eigen::Index>(j);
        if (!best || std::abs(full.eigenvalues(jj) - predicted) <
                         std::abs(full.eigenvalues(static_cast<Eigen::Index>(*best)) - predicted)) {
          best = j;
        }
      }
      used[*best] = true;
      max_error = std::max(
          max_error, std::abs(full.eigenvalues(static_cast<Eigen::Index>(*best)) - predicted));
    }
    out.push_back({scale, max_error});
  }
  return out;
}

}  // namespace twolevel
