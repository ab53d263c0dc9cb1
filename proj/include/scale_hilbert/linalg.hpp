#pragma once

#include "scale_hilbert/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace scale_hilbert {

/// Smallest eigenvalue of the symmetric part of m.
inline double smallest_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline bool is_spd(const Matrix& m, double symmetry_tol = 1e-12) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (!m.allFinite()) return false;
  if (relative_frobenius(m, m.transpose()) > symmetry_tol) return false;
  Eigen::LLT<Matrix> llt(symmetrized(m));
  if (llt.info() != Eigen::Success) return false;
  return smallest_eigenvalue(m) > 0.0;
}

inline void require_spd(const Matrix& m, const char* what) {
  require_square(m, what);
  if (!is_spd(m)) throw not_spd_error(std::string(what) + ": matrix is not symmetric positive definite");
}

struct GeneralizedEigen {
  Vector values;  // nondecreasing
  Matrix vectors; // columns v with vᵀ B v = 1 and A v = μ B v
};

/// Solves A v = μ B v for symmetric A and SPD B by Cholesky reduction:
/// B = L Lᵀ, C = L⁻¹ A L⁻ᵀ, C w = μ w, v = L⁻ᵀ w.
/// Eigenvalues come out nondecreasing; equal values keep the solver's order.
inline GeneralizedEigen generalized_symmetric_eigen(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "generalized eigenproblem");
  require_square(a, "generalized eigenproblem");
  Eigen::LLT<Matrix> llt(symmetrized(b));
  if (llt.info() != Eigen::Success) throw not_spd_error("generalized eigenproblem: right-hand matrix is not SPD");
  const Index n = a.rows();
  Matrix c = llt.matrixL().solve(symmetrized(a));
  c = llt.matrixL().solve(c.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(c));
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigenproblem: eigensolver failed");

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Index i, Index j) { return es.eigenvalues()(i) < es.eigenvalues()(j); });

  GeneralizedEigen out{Vector(n), Matrix(n, n)};
  const Matrix v = llt.matrixU().solve(es.eigenvectors());
  for (Index j = 0; j < n; ++j) {
    const Index src = perm[static_cast<std::size_t>(j)];
    out.values(j) = es.eigenvalues()(src);
    out.vectors.col(j) = v.col(src);
  }
  return out;
}

/// Orthonormal basis (columns) of the span of the given columns, via column-pivoted QR.
inline Matrix orthonormal_basis(const Matrix& columns) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(columns);
  const Index r = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), r);
  return q;
}

/// Largest principal angle between the subspaces spanned by the orthonormal columns of u and v.
/// Computed from sines (‖(I - PᵤPᵤᵀ)V‖₂) so that tiny angles are resolved. Subspaces of different
/// dimension are at angle π/2; two empty subspaces are at angle 0.
inline double largest_principal_angle(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols()) return M_PI / 2.0;
  if (u.cols() == 0) return 0.0;
  const Matrix residual = v - u * (u.transpose() * v);
  Eigen::JacobiSVD<Matrix> svd(residual);
  const double s = std::min(1.0, svd.singularValues()(0));
  return std::asin(s);
}

} // namespace scale_hilbert
