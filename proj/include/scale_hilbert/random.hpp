#pragma once

// Seeded generators for the randomized instances used by tests, the acceptance
// suite and the CLI.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions from <random> are not (their algorithms are
// implementation-defined), so uniform and normal variates are derived here
// directly from the raw 64-bit draws: uniform doubles take the top 53 bits,
// normals use the Box-Muller transform. A given seed therefore produces the
// same matrices on every conforming standard library.

#include "scale_hilbert/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace scale_hilbert {

class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi]. The modulo bias is below 2^-50 for the ranges used here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Matrix random_gaussian_matrix(Index rows, Index cols, SeededRng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
inline Matrix random_orthogonal(Index n, SeededRng& rng) {
  const Matrix g = random_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

inline Matrix random_orthogonal(Index n, std::uint64_t seed) {
  SeededRng rng(seed);
  return random_orthogonal(n, rng);
}

/// Qᵀ diag(d) Q for a Haar orthogonal Q; symmetric up to one explicit symmetrization.
inline Matrix conjugated_diagonal(const Vector& d, const Matrix& q) {
  return symmetrized(q.transpose() * d.asDiagonal() * q);
}

/// Random SPD matrix with eigenvalues spread over [lo, hi].
inline Matrix random_spd(Index n, SeededRng& rng, double lo = 0.5, double hi = 4.0) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
  const Matrix q = random_orthogonal(n, rng);
  return conjugated_diagonal(d, q);
}

/// A random symmetric operator QᵀDQ with a prescribed number of exact zero eigenvalues.
/// Nonzero eigenvalues have modulus in [0.25, spread] and random sign.
struct RandomSymmetric {
  Matrix matrix;
  Vector eigenvalues; // unsorted, as placed on the diagonal of D
  Index kernel_dim = 0;
};

inline RandomSymmetric random_symmetric(Index n, Index kernel_dim, SeededRng& rng, double spread = 4.0) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    if (i < kernel_dim) {
      d(i) = 0.0;
    } else {
      const double magnitude = rng.uniform(0.25, spread);
      d(i) = rng.uniform() < 0.5 ? -magnitude : magnitude;
    }
  }
  const Matrix q = random_orthogonal(n, rng);
  return {conjugated_diagonal(d, q), d, kernel_dim};
}

} // namespace scale_hilbert
