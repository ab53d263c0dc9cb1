#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace scale_hilbert {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative Frobenius tolerance used by residual checks unless a caller passes its own.
inline constexpr double default_tolerance = 1e-8;

/// Raised when a matrix that must be symmetric positive definite is not.
class not_spd_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operator fails the symmetry axiom where an analysis requires it.
class symmetry_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a resolvent is requested at (numerically) a point of the spectrum.
class spectrum_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class dimension_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw dimension_error(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
}

inline void require_same_size(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error(std::string(what) + ": size mismatch (" + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ")");
  }
}

/// ||a - b||_F / ||b||_F, falling back to the absolute norm when b vanishes.
template <typename DerivedA, typename DerivedB>
double relative_frobenius(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const double diff = (a - b).norm();
  const double scale = b.norm();
  return scale > 0.0 ? diff / scale : diff;
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Standard numerical rank threshold factor: n * machine epsilon.
inline double default_rank_tolerance(Index n) {
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon();
}

} // namespace scale_hilbert
