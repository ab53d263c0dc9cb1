#pragma once

// Truncated scale Hilbert spaces.
//
// A TruncatedScaleSpace is a graded family of inner products <·,·>_0, ..., <·,·>_kmax
// on one coordinate space R^n. Grade k is either diagonal (a weight, <x,y> = Σ f(ν) x_ν y_ν)
// or a general SPD Gram matrix. At finite n every grade is the whole of R^n, so the
// density axiom of a scale holds trivially and is not represented; compactness of the
// inclusions shows up only through their singular values.

#include "scale_hilbert/common.hpp"
#include "scale_hilbert/linalg.hpp"
#include "scale_hilbert/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <variant>
#include <vector>

namespace scale_hilbert {

struct DiagonalGrade {
  Weight weight;
};

struct GramGrade {
  Matrix gram;
};

using GradeDescriptor = std::variant<DiagonalGrade, GramGrade>;

class TruncatedScaleSpace {
public:
  TruncatedScaleSpace(Index n, std::vector<GradeDescriptor> grades) : n_(n), grades_(std::move(grades)) {
    if (n_ < 1) throw dimension_error("scale space dimension must be at least 1");
    if (grades_.empty()) throw std::invalid_argument("scale space needs at least grade 0");
    for (std::size_t k = 0; k < grades_.size(); ++k) {
      const std::string what = "grade " + std::to_string(k);
      if (const auto* d = std::get_if<DiagonalGrade>(&grades_[k])) {
        if (d->weight.size() != n_) throw dimension_error(what + ": weight length does not match dimension");
        require_valid(d->weight);
      } else {
        const auto& g = std::get<GramGrade>(grades_[k]).gram;
        if (g.rows() != n_ || g.cols() != n_) throw dimension_error(what + ": Gram size does not match dimension");
        require_spd(g, what.c_str());
      }
    }
  }

  /// ℓ^{2,f} truncated to grades 0..k_max: grade k is Diagonal(f^k).
  static TruncatedScaleSpace weighted(const Weight& f, int k_max) {
    std::vector<GradeDescriptor> grades;
    for (int k = 0; k <= k_max; ++k) grades.emplace_back(DiagonalGrade{weight_power(f, static_cast<std::uint64_t>(k))});
    return TruncatedScaleSpace(f.size(), std::move(grades));
  }

  Index dimension() const { return n_; }
  int k_max() const { return static_cast<int>(grades_.size()) - 1; }

  const GradeDescriptor& grade(int k) const {
    check_grade(k);
    return grades_[static_cast<std::size_t>(k)];
  }

  bool is_diagonal(int k) const { return std::holds_alternative<DiagonalGrade>(grade(k)); }

  /// Dense Gram matrix of grade k.
  Matrix gram(int k) const {
    const auto& g = grade(k);
    if (const auto* d = std::get_if<DiagonalGrade>(&g)) {
      Vector diag(n_);
      for (Index nu = 1; nu <= n_; ++nu) diag(nu - 1) = weight_eval(d->weight, nu);
      return diag.asDiagonal();
    }
    return std::get<GramGrade>(g).gram;
  }

  void check_grade(int k) const {
    if (k < 0 || k > k_max())
      throw std::out_of_range("grade " + std::to_string(k) + " outside 0.." + std::to_string(k_max()));
  }

private:
  Index n_;
  std::vector<GradeDescriptor> grades_;
};

struct GradedVector {
  Vector coords;
  int grade = 0;
};

inline double inner_product(const TruncatedScaleSpace& s, int k, const GradedVector& x, const GradedVector& y) {
  s.check_grade(k);
  if (x.coords.size() != s.dimension() || y.coords.size() != s.dimension())
    throw dimension_error("inner_product: vector length does not match space dimension");
  const auto& g = s.grade(k);
  if (const auto* d = std::get_if<DiagonalGrade>(&g)) {
    double sum = 0.0;
    for (Index nu = 1; nu <= s.dimension(); ++nu)
      sum += std::exp(weight_log_eval(d->weight, nu)) * x.coords(nu - 1) * y.coords(nu - 1);
    return sum;
  }
  return x.coords.dot(std::get<GramGrade>(g).gram * y.coords);
}

/// Singular values, nonincreasing, of the identity map (R^n, <·,·>_k) → (R^n, <·,·>_{k-1}).
/// They are the square roots of the generalized eigenvalues of G_{k-1} v = μ G_k v; for two
/// diagonal grades they are f_{k-1}(ν)/f_k(ν) square-rooted, formed in the log domain.
inline std::vector<double> inclusion_singular_values(const TruncatedScaleSpace& s, int k) {
  if (k < 1) throw std::out_of_range("inclusion_singular_values: grade must be at least 1");
  s.check_grade(k);
  std::vector<double> out;
  if (s.is_diagonal(k) && s.is_diagonal(k - 1)) {
    const auto& hi = std::get<DiagonalGrade>(s.grade(k)).weight;
    const auto& lo = std::get<DiagonalGrade>(s.grade(k - 1)).weight;
    for (Index nu = 1; nu <= s.dimension(); ++nu)
      out.push_back(std::exp(0.5 * (weight_log_eval(lo, nu) - weight_log_eval(hi, nu))));
  } else {
    const auto ge = generalized_symmetric_eigen(s.gram(k - 1), s.gram(k));
    for (Index i = 0; i < ge.values.size(); ++i) out.push_back(std::sqrt(std::max(0.0, ge.values(i))));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// The shifted space with grades k ↦ k + m.
inline TruncatedScaleSpace shift(const TruncatedScaleSpace& s, int m) {
  if (m < 0 || m > s.k_max())
    throw std::out_of_range("shift by " + std::to_string(m) + " exceeds available grades (k_max = " +
                            std::to_string(s.k_max()) + ")");
  std::vector<GradeDescriptor> grades;
  for (int k = m; k <= s.k_max(); ++k) grades.push_back(s.grade(k));
  return TruncatedScaleSpace(s.dimension(), std::move(grades));
}

struct EquivalenceConstants {
  double c_lo;
  double c_hi;
};

/// Sharp constants with c_lo ‖x‖²_b ≤ ‖x‖²_a ≤ c_hi ‖x‖²_b: the extreme eigenvalues of g_a v = μ g_b v.
inline EquivalenceConstants equivalence_constants(const Matrix& g_a, const Matrix& g_b) {
  require_same_size(g_a, g_b, "equivalence_constants");
  require_spd(g_a, "equivalence_constants (first form)");
  require_spd(g_b, "equivalence_constants (second form)");
  const auto ge = generalized_symmetric_eigen(g_a, g_b);
  return {ge.values(0), ge.values(ge.values.size() - 1)};
}

/// Equivalence constants between grade k of s and grade k of t (same coordinates).
/// Two diagonal grades reduce to extreme weight ratios, computed without forming Grams.
inline EquivalenceConstants grade_equivalence_constants(const TruncatedScaleSpace& s, const TruncatedScaleSpace& t,
                                                        int k) {
  if (s.dimension() != t.dimension()) throw dimension_error("grade_equivalence_constants: dimension mismatch");
  if (s.is_diagonal(k) && t.is_diagonal(k)) {
    const auto& fa = std::get<DiagonalGrade>(s.grade(k)).weight;
    const auto& fb = std::get<DiagonalGrade>(t.grade(k)).weight;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index nu = 1; nu <= s.dimension(); ++nu) {
      const double r = weight_log_eval(fa, nu) - weight_log_eval(fb, nu);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return {std::exp(lo), std::exp(hi)};
  }
  return equivalence_constants(s.gram(k), t.gram(k));
}

struct IsometryReport {
  bool isometric = false;
  std::vector<double> defects; // per grade, relative Frobenius
};

/// Checks that `map` (coordinates of s → coordinates of t) preserves every grade:
/// mapᵀ G^t_k map = G^s_k for all k.
inline IsometryReport is_scale_isometric(const TruncatedScaleSpace& s, const TruncatedScaleSpace& t, const Matrix& map,
                                         double tol = default_tolerance) {
  if (s.dimension() != t.dimension() || map.rows() != t.dimension() || map.cols() != s.dimension())
    throw dimension_error("is_scale_isometric: dimension mismatch");
  if (s.k_max() != t.k_max()) throw dimension_error("is_scale_isometric: spaces have different numbers of grades");
  Eigen::FullPivLU<Matrix> lu(map);
  if (!lu.isInvertible()) throw std::invalid_argument("is_scale_isometric: map is not invertible");
  IsometryReport report{true, {}};
  for (int k = 0; k <= s.k_max(); ++k) {
    const Matrix transported = map.transpose() * t.gram(k) * map;
    const double defect = relative_frobenius(transported, s.gram(k));
    report.defects.push_back(defect);
    if (!(defect <= tol)) report.isometric = false;
  }
  return report;
}

/// A basis orthogonal for both forms (simultaneous diagonalization). Columns are the
/// generalized eigenvectors of g_a v = μ g_b v, normalized to unit g_b-length.
inline Matrix common_orthogonal_basis(const Matrix& g_a, const Matrix& g_b) {
  require_same_size(g_a, g_b, "common_orthogonal_basis");
  require_spd(g_a, "common_orthogonal_basis (first form)");
  require_spd(g_b, "common_orthogonal_basis (second form)");
  return generalized_symmetric_eigen(g_a, g_b).vectors;
}

/// Frobenius norm of the off-diagonal part of bᵀ g b relative to the whole.
inline double off_diagonal_mass(const Matrix& basis, const Matrix& g) {
  const Matrix t = basis.transpose() * g * basis;
  Matrix off = t;
  off.diagonal().setZero();
  return off.norm() / t.norm();
}

} // namespace scale_hilbert
