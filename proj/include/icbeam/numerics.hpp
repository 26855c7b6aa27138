// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "icbeam/errors.hpp"
#include "icbeam/rng.hpp"

namespace icbeam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvector columns orthonormal and phase-canonicalized.
struct HermitianEigenResult {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

/// One (eigenvalue, unit eigenvector) pair.
struct EigenPair {
  double value = 0.0;
  CVector vector;
};

inline bool all_finite(const CMatrix& a) {
  return a.allFinite();
}

/// Rotates v by a unit phase so its first component with modulus > 1e-8 is
/// real and positive. Makes eigenvector output reproducible: iterative
/// algorithms built on top never see an arbitrary global phase.
inline CVector canonical_phase(CVector v) {
  constexpr double kSignificant = 1e-8;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double m = std::abs(v[k]);
    if (m > kSignificant) {
      v *= std::conj(v[k]) / m;
      break;
    }
  }
  return v;
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (A + A^H)/2 before decomposition; every
/// Hermitian matrix in this library is Hermitian by construction and the
/// symmetrization only absorbs accumulation error. Inputs further than
/// 1e-9 * |A|_F from Hermitian are rejected.
inline HermitianEigenResult eig_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("eig_hermitian: matrix must be square");
  }
  if (!all_finite(a)) {
    throw InvalidInputError("eig_hermitian: non-finite entries");
  }
  const double scale = a.norm();
  if ((a - a.adjoint()).norm() > 1e-9 * std::max(scale, 1e-300)) {
    throw InvalidInputError("eig_hermitian: matrix is not Hermitian");
  }
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw InvalidInputError("eig_hermitian: decomposition failed");
  }
  HermitianEigenResult result;
  result.eigenvalues = solver.eigenvalues();
  result.eigenvectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < result.eigenvectors.cols(); ++k) {
    result.eigenvectors.col(k) = canonical_phase(result.eigenvectors.col(k));
  }
  return result;
}

namespace detail {

// Ties within 1e-10 (relative to the eigenvalue scale) resolve to the
// first column of the computed basis, keeping repeated runs identical.
inline constexpr double kEigenTieTol = 1e-10;

inline double tie_scale(const RVector& eigenvalues) {
  double m = 1.0;
  if (eigenvalues.size() > 0) {
    m = std::max(m, eigenvalues.cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace detail

/// Eigenpair with the largest (algebraic, signed) eigenvalue.
inline EigenPair dominant_eigenpair(const CMatrix& a) {
  const HermitianEigenResult r = eig_hermitian(a);
  const Eigen::Index n = r.eigenvalues.size();
  const double tol = detail::kEigenTieTol * detail::tie_scale(r.eigenvalues);
  Eigen::Index pick = n - 1;
  while (pick > 0 && r.eigenvalues[n - 1] - r.eigenvalues[pick - 1] <= tol) --pick;
  return {r.eigenvalues[pick], r.eigenvectors.col(pick)};
}

/// Eigenpair with the smallest (algebraic) eigenvalue.
inline EigenPair least_eigenpair(const CMatrix& a) {
  const HermitianEigenResult r = eig_hermitian(a);
  // Ascending order: the first column is already the tie-canonical choice.
  return {r.eigenvalues[0], r.eigenvectors.col(0)};
}

inline CVector dominant_eigenvector(const CMatrix& a) { return dominant_eigenpair(a).vector; }
inline CVector least_eigenvector(const CMatrix& a) { return least_eigenpair(a).vector; }

/// Orthogonal projector onto the conjugate direction of a row vector h:
/// Pi = h^H h / |h|^2, so Pi h^H = h^H.
inline CMatrix projector_onto(const CVector& h_row) {
  const double n2 = h_row.squaredNorm();
  if (!(n2 > 0.0) || !h_row.allFinite()) {
    throw DegenerateInputError("projector_onto: zero or non-finite vector");
  }
  return (h_row.conjugate() * h_row.transpose()) / n2;
}

/// Complement projector: Pi_perp = I - Pi, so Pi_perp h^H = 0.
inline CMatrix projector_orth(const CVector& h_row) {
  const CMatrix pi = projector_onto(h_row);
  return CMatrix::Identity(pi.rows(), pi.cols()) - pi;
}

/// rows x cols matrix of i.i.d. CN(0,1) entries, deterministic in the
/// stream state. Entries are drawn row-major.
inline CMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.complex_gaussian();
    }
  }
  return m;
}

/// Phase-invariant distance between unit vectors: sqrt(1 - |a^H b|^2).
inline double chordal_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("chordal_distance: size mismatch");
  }
  const double overlap = std::norm(a.dot(b));
  return std::sqrt(std::max(0.0, 1.0 - overlap));
}

}  // namespace icbeam
