#pragma once

// Scale Hessian operators at truncation, and the reconstruction of the fractal
// structure they induce.
//
// A ScaleOperator is a real n×n matrix A written in coordinates that are orthonormal for
// grade 0, together with the scale it acts on (grade 1 plays the domain of A). The
// analysis runs in the order of the argument it certifies:
//
//   symmetry and index 0         ker(A) = im(A)^⊥, hence self-adjointness
//   graph norm                   <ξ,η>_A = <ξ,η>_0 + <Aξ,Aη>_0, equivalent to grade 1
//   resolvent B_λ = (A - λ)^-1   normal, B_λ* = B_λ̄, eigenvalues μ_ν = 1/(γ_ν - λ)
//   spectral decomposition       A = Σ γ_ν <·,e_ν> e_ν, sorted by |γ_ν|
//   fractal weight               f_A(ν) = 1 + γ_ν²
//   graph ladder                 <ξ,η>_{k+1} = <ξ,η>_k + <Aξ,Aη>_k, orthonormal basis f_A(ν)^{-k/2} e_ν
//
// Every step is reported as a residual, never as a comparison of eigenvectors, so
// degenerate eigenspaces are handled without special cases.

#include "scale_hilbert/common.hpp"
#include "scale_hilbert/linalg.hpp"
#include "scale_hilbert/spaces.hpp"
#include "scale_hilbert/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace scale_hilbert {

/// Default resolvent point. Purely imaginary points are off the spectrum of every symmetric A.
inline const Complex default_resolvent_point{0.0, 1.0};

/// Grams of the graph ladder G_0 = I, G_{k+1} = G_k + Aᵀ G_k A, each symmetrized after assembly.
inline std::vector<Matrix> graph_ladder_grams(const Matrix& a, int k_max) {
  require_square(a, "graph ladder");
  std::vector<Matrix> grams;
  grams.push_back(Matrix::Identity(a.rows(), a.cols()));
  for (int k = 0; k < k_max; ++k) {
    const Matrix& g = grams.back();
    const Matrix next = g + a.transpose() * g * a;
    grams.push_back(symmetrized(next));
  }
  return grams;
}

class ScaleOperator {
public:
  ScaleOperator(Matrix a, TruncatedScaleSpace scale) : matrix_(std::move(a)), scale_(std::move(scale)) {
    require_square(matrix_, "scale operator");
    if (matrix_.rows() != scale_.dimension())
      throw dimension_error("scale operator: matrix size does not match the scale dimension");
    if (!matrix_.allFinite()) throw std::invalid_argument("scale operator: matrix has non-finite entries");
  }

  /// A on the scale generated by its own graph norms, grades 0..k_max.
  static ScaleOperator with_graph_scale(Matrix a, int k_max = 3) {
    std::vector<GradeDescriptor> grades;
    for (auto& g : graph_ladder_grams(a, k_max)) grades.emplace_back(GramGrade{std::move(g)});
    const Index n = a.rows();
    return ScaleOperator(std::move(a), TruncatedScaleSpace(n, std::move(grades)));
  }

  Index dimension() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  const TruncatedScaleSpace& scale() const { return scale_; }

private:
  Matrix matrix_;
  TruncatedScaleSpace scale_;
};

// ---------------------------------------------------------------------------------------
// Symmetry and the Fredholm index

struct SymmetryReport {
  double defect = 0.0; // ‖A - Aᵀ‖_F / (√2 ‖A‖_F), in [0, 1] for strictly triangular A
  double tolerance = default_tolerance;
  bool pass = true;
};

inline SymmetryReport check_symmetry(const Matrix& a, double tol = default_tolerance) {
  require_square(a, "check_symmetry");
  const double norm = a.norm();
  const double defect = norm > 0.0 ? (a - a.transpose()).norm() / (std::sqrt(2.0) * norm) : 0.0;
  return {defect, tol, defect <= tol};
}

inline SymmetryReport check_symmetry(const ScaleOperator& op, double tol = default_tolerance) {
  return check_symmetry(op.matrix(), tol);
}

struct KernelCokernel {
  Index ker_dim = 0;
  Index coker_dim = 0;
  double subspace_angle = 0.0; // largest principal angle between ker(A) and im(A)^⊥
  Index index() const { return ker_dim - coker_dim; }
};

/// Kernel and cokernel from the SVD: singular values at or below rank_tol·σ_max count as zero.
/// Right singular vectors span ker(A), left ones span im(A)^⊥. A negative rank_tol selects n·ε.
inline KernelCokernel check_kernel_cokernel(const Matrix& a, double rank_tol = -1.0) {
  require_square(a, "check_kernel_cokernel");
  const Index n = a.rows();
  if (rank_tol < 0.0) rank_tol = default_rank_tolerance(n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double threshold = rank_tol * s(0);
  Index rank = 0;
  while (rank < n && s(rank) > threshold) ++rank;
  const Index null_dim = n - rank;
  KernelCokernel out;
  out.ker_dim = null_dim;
  out.coker_dim = null_dim;
  const Matrix kernel = svd.matrixV().rightCols(null_dim);
  const Matrix cokernel = svd.matrixU().rightCols(null_dim);
  out.subspace_angle = largest_principal_angle(cokernel, kernel);
  return out;
}

inline KernelCokernel check_kernel_cokernel(const ScaleOperator& op, double rank_tol = -1.0) {
  return check_kernel_cokernel(op.matrix(), rank_tol);
}

// ---------------------------------------------------------------------------------------
// Regularity and graph norms

/// Best constant C with ‖ξ‖²_{n+1} ≤ C² (‖Aξ‖²_n + ‖ξ‖²_n), i.e. √ of the top eigenvalue of
/// G_{n+1} v = μ (AᵀG_nA + G_n) v. Since a + b ≥ √(a² + b²) ≥ (a + b)/√2, the constant for the
/// right-hand side ‖Aξ‖_n + ‖ξ‖_n lies in [C/√2, C].
inline double regularity_constant(const ScaleOperator& op, int n_grade) {
  const auto& scale = op.scale();
  if (n_grade < 0 || n_grade + 1 > scale.k_max())
    throw std::out_of_range("regularity_constant: scale lacks grades " + std::to_string(n_grade) + " and " +
                            std::to_string(n_grade + 1));
  const Matrix& a = op.matrix();
  const Matrix g_n = scale.gram(n_grade);
  const Matrix rhs = symmetrized(a.transpose() * g_n * a + g_n);
  const auto ge = generalized_symmetric_eigen(scale.gram(n_grade + 1), rhs);
  return std::sqrt(std::max(0.0, ge.values(ge.values.size() - 1)));
}

inline double graph_inner_product(const Matrix& a, const Vector& xi, const Vector& eta) {
  if (xi.size() != a.cols() || eta.size() != a.cols())
    throw dimension_error("graph_inner_product: vector length does not match operator");
  return xi.dot(eta) + (a * xi).dot(a * eta);
}

inline double graph_inner_product(const ScaleOperator& op, const Vector& xi, const Vector& eta) {
  return graph_inner_product(op.matrix(), xi, eta);
}

/// Gram of the graph inner product, I + AᵀA.
inline Matrix graph_gram(const Matrix& a) {
  return symmetrized(Matrix::Identity(a.rows(), a.cols()) + a.transpose() * a);
}

// ---------------------------------------------------------------------------------------
// Resolvent

struct ResolventData {
  Complex lambda;
  ComplexMatrix b;  // (A - λ)^-1
  Matrix a;         // the operator the resolvent belongs to
  double residual;  // ‖(A - λ)B - I‖_F
};

/// B_λ = (A - λ id)^-1. Throws spectrum_error when A - λ is numerically singular
/// (reciprocal condition at or below n·ε).
inline ResolventData resolvent(const Matrix& a, Complex lambda = default_resolvent_point, bool require_off_axis = true) {
  require_square(a, "resolvent");
  if (require_off_axis && lambda.imag() == 0.0)
    throw std::invalid_argument("resolvent: λ must lie off the real axis");
  const Index n = a.rows();
  const ComplexMatrix shifted =
      a.cast<Complex>() - lambda * ComplexMatrix::Identity(n, n);
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  // rcond() reports 1 when its estimate runs into an exact zero pivot, so pivots are checked too.
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
  const double rcond = std::min(lu.rcond(), pivot_ratio);
  ComplexMatrix inverse;
  if (rcond > default_rank_tolerance(n)) inverse = lu.inverse();
  if (!(rcond > default_rank_tolerance(n)) || !inverse.allFinite())
    throw spectrum_error("resolvent point on spectrum: reciprocal condition " + std::to_string(rcond));
  ResolventData out{lambda, std::move(inverse), a, 0.0};
  out.residual = (shifted * out.b - ComplexMatrix::Identity(n, n)).norm();
  return out;
}

inline ResolventData resolvent(const ScaleOperator& op, Complex lambda = default_resolvent_point,
                               bool require_off_axis = true) {
  return resolvent(op.matrix(), lambda, require_off_axis);
}

struct NormalityDefect {
  double commutator_defect; // ‖B*B - BB*‖_F / ‖B‖²_F
  double adjoint_defect;    // ‖B_λ* - B_λ̄‖_F / ‖B_λ‖_F, B_λ̄ from a second solve
};

inline NormalityDefect normality_defect(const ResolventData& r) {
  const ComplexMatrix& b = r.b;
  const ComplexMatrix bh = b.adjoint();
  const double bnorm = b.norm();
  const ResolventData conj = resolvent(r.a, std::conj(r.lambda), false);
  NormalityDefect out{};
  out.commutator_defect = (bh * b - b * bh).norm() / (bnorm * bnorm);
  out.adjoint_defect = (bh - conj.b).norm() / bnorm;
  return out;
}

// ---------------------------------------------------------------------------------------
// Spectral decomposition and the fractal weight

struct ResolventConsistency {
  Complex lambda;
  double gamma_defect = 0.0; // max_ν |γ_ν - (1/μ_ν + λ)| / (1 + |γ_ν|)
  double mu_defect = 0.0;    // max_ν |μ_ν - 1/(γ_ν - λ)| / |1/(γ_ν - λ)|
};

struct SpectralData {
  Vector gammas;            // eigenvalue of column ν of `vectors`
  Matrix vectors;           // orthonormal eigenvectors e_ν
  std::vector<Index> order; // 0-based; ν ↦ |gammas[order[ν]]| is nondecreasing
  double orthogonality_residual = 0.0;  // ‖VᵀV - I‖_F
  double reconstruction_residual = 0.0; // ‖A - V diag(γ) Vᵀ‖_F / ‖A‖_F
  ResolventConsistency resolvent_check;

  Index size() const { return gammas.size(); }
  Vector sorted_gammas() const {
    Vector out(size());
    for (Index nu = 0; nu < size(); ++nu) out(nu) = gammas(order[static_cast<std::size_t>(nu)]);
    return out;
  }
  /// Eigenvectors as columns in |γ|-sorted order.
  Matrix sorted_vectors() const {
    Matrix out(vectors.rows(), size());
    for (Index nu = 0; nu < size(); ++nu) out.col(nu) = vectors.col(order[static_cast<std::size_t>(nu)]);
    return out;
  }
};

/// Matches each real eigenvector e_ν to the eigenvector of B_λ it correlates with most and
/// compares the paired eigenvalues in both directions.
inline ResolventConsistency resolvent_eigen_consistency(const Matrix& a, const Vector& gammas, const Matrix& vectors,
                                                        Complex lambda = default_resolvent_point) {
  const ResolventData r = resolvent(a, lambda);
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(r.b);
  if (ces.info() != Eigen::Success) throw std::runtime_error("resolvent eigensolver failed");
  ComplexMatrix w = ces.eigenvectors();
  w.colwise().normalize();
  const ComplexMatrix overlap = w.adjoint() * vectors.cast<Complex>();
  ResolventConsistency out{lambda, 0.0, 0.0};
  for (Index nu = 0; nu < gammas.size(); ++nu) {
    Index best = 0;
    overlap.col(nu).cwiseAbs().maxCoeff(&best);
    const Complex mu = ces.eigenvalues()(best);
    const double gamma = gammas(nu);
    out.gamma_defect = std::max(out.gamma_defect, std::abs(gamma - (1.0 / mu + lambda)) / (1.0 + std::abs(gamma)));
    const Complex expected = 1.0 / (gamma - lambda);
    out.mu_defect = std::max(out.mu_defect, std::abs(mu - expected) / std::abs(expected));
  }
  return out;
}

/// Eigen-decomposition of a symmetric operator. Eigenpairs are indexed by the coordinate
/// each eigenvector overlaps most (so a diagonal matrix keeps its own order), each vector is
/// signed to make that entry positive, and `order` sorts by |γ|, then γ, then that index.
inline SpectralData spectral_decompose(const Matrix& a, double symmetry_tol = default_tolerance,
                                       Complex lambda = default_resolvent_point) {
  const auto sym = check_symmetry(a, symmetry_tol);
  if (!sym.pass)
    throw symmetry_error("spectral_decompose: operator is not symmetric (defect " + std::to_string(sym.defect) + ")");
  const Index n = a.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a));
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_decompose: eigensolver failed");

  std::vector<Index> peak(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) es.eigenvectors().col(j).cwiseAbs().maxCoeff(&peak[static_cast<std::size_t>(j)]);
  std::vector<Index> raw(static_cast<std::size_t>(n));
  std::iota(raw.begin(), raw.end(), Index{0});
  std::stable_sort(raw.begin(), raw.end(),
                   [&](Index i, Index j) { return peak[static_cast<std::size_t>(i)] < peak[static_cast<std::size_t>(j)]; });

  SpectralData out;
  out.gammas.resize(n);
  out.vectors.resize(n, n);
  for (Index nu = 0; nu < n; ++nu) {
    const Index src = raw[static_cast<std::size_t>(nu)];
    Vector v = es.eigenvectors().col(src);
    if (v(peak[static_cast<std::size_t>(src)]) < 0.0) v = -v;
    out.gammas(nu) = es.eigenvalues()(src);
    out.vectors.col(nu) = v;
  }
  out.order.resize(static_cast<std::size_t>(n));
  std::iota(out.order.begin(), out.order.end(), Index{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](Index i, Index j) {
    const double ai = std::abs(out.gammas(i));
    const double aj = std::abs(out.gammas(j));
    if (ai != aj) return ai < aj;
    return out.gammas(i) < out.gammas(j);
  });

  out.orthogonality_residual = (out.vectors.transpose() * out.vectors - Matrix::Identity(n, n)).norm();
  const Matrix rebuilt = out.vectors * out.gammas.asDiagonal() * out.vectors.transpose();
  out.reconstruction_residual = relative_frobenius(rebuilt, a);
  out.resolvent_check = resolvent_eigen_consistency(a, out.gammas, out.vectors, lambda);
  return out;
}

inline SpectralData spectral_decompose(const ScaleOperator& op, double symmetry_tol = default_tolerance) {
  return spectral_decompose(op.matrix(), symmetry_tol);
}

/// log(1 + γ²) without overflow for large |γ|.
inline double log_one_plus_square(double gamma) {
  const double g = std::abs(gamma);
  if (g <= 1.0) return std::log1p(g * g);
  return 2.0 * std::log(g) + std::log1p(1.0 / (g * g));
}

struct FractalWeight {
  Weight weight; // f_A(ν) = 1 + γ_ν², ν in |γ|-sorted order
};

inline FractalWeight fractal_weight(const SpectralData& spec) {
  std::vector<double> logs(static_cast<std::size_t>(spec.size()));
  const Vector sorted = spec.sorted_gammas();
  for (Index nu = 0; nu < spec.size(); ++nu) logs[static_cast<std::size_t>(nu)] = log_one_plus_square(sorted(nu));
  return {Weight(std::move(logs), "f_A = 1 + gamma^2")};
}

/// Columns f_A(ν)^{-k/2} e_ν in |γ|-sorted order.
inline Matrix rescaled_basis(const SpectralData& spec, const FractalWeight& fw, int k) {
  if (k < 0) throw std::out_of_range("rescaled_basis: grade must be nonnegative");
  Matrix basis = spec.sorted_vectors();
  for (Index nu = 0; nu < spec.size(); ++nu)
    basis.col(nu) *= std::exp(-0.5 * k * weight_log_eval(fw.weight, nu + 1));
  return basis;
}

// ---------------------------------------------------------------------------------------
// Graph-norm equivalence with grade 1

struct GraphEquivalence {
  double c_lo;
  double c_hi;
  double c_step1; // max{c0, |λ| c0}, c0 = ‖(A - λ)^-1‖ as a map grade 0 → grade 1
};

/// c_lo, c_hi: extreme eigenvalues of G_1 v = μ (I + AᵀA) v, so c_lo ‖ξ‖²_A ≤ ‖ξ‖²_1 ≤ c_hi ‖ξ‖²_A.
inline GraphEquivalence graph_equivalence_constants(const ScaleOperator& op, Complex lambda = default_resolvent_point) {
  const auto& scale = op.scale();
  if (scale.k_max() < 1) throw std::out_of_range("graph_equivalence_constants: scale has no grade 1");
  const Matrix g1 = scale.gram(1);
  const auto ec = equivalence_constants(g1, graph_gram(op.matrix()));

  const ResolventData r = resolvent(op.matrix(), lambda, false);
  Eigen::LLT<Matrix> llt(g1);
  const ComplexMatrix into_grade1 = llt.matrixU().toDenseMatrix().cast<Complex>() * r.b;
  Eigen::JacobiSVD<ComplexMatrix> svd(into_grade1);
  const double c0 = svd.singularValues()(0);
  return {ec.c_lo, ec.c_hi, std::max(c0, std::abs(lambda) * c0)};
}

// ---------------------------------------------------------------------------------------
// Reconstruction of the fractal structure

struct FractalStructure {
  TruncatedScaleSpace space;          // grades built by the graph ladder
  SpectralData spectral;
  FractalWeight weight;
  std::vector<double> grade_deviation; // ‖R_kᵀ G_k R_k - I‖_F for the rescaled bases R_k
  IsometryReport isometry;            // sorted eigenvector map onto Diagonal(f_A^k)
  double tolerance;
  bool pass() const {
    return isometry.isometric &&
           std::all_of(grade_deviation.begin(), grade_deviation.end(), [&](double d) { return d <= tolerance; });
  }
};

/// Builds the graph ladder of A and certifies that, for every grade k, the rescaled basis
/// f_A(ν)^{-k/2} e_ν is orthonormal, i.e. that the ladder is scale isometric to ℓ^{2,f_A}.
inline FractalStructure build_fractal_structure(const Matrix& a, int k_max, double tol = default_tolerance) {
  if (k_max < 0) throw std::out_of_range("build_fractal_structure: k_max must be nonnegative");
  SpectralData spec = spectral_decompose(a, tol);
  FractalWeight fw = fractal_weight(spec);
  const auto grams = graph_ladder_grams(a, k_max);
  std::vector<GradeDescriptor> grades;
  std::vector<double> deviation;
  const Index n = a.rows();
  for (int k = 0; k <= k_max; ++k) {
    const Matrix r = rescaled_basis(spec, fw, k);
    const auto& g = grams[static_cast<std::size_t>(k)];
    deviation.push_back((r.transpose() * g * r - Matrix::Identity(n, n)).norm());
    grades.emplace_back(GramGrade{g});
  }
  TruncatedScaleSpace space(n, std::move(grades));
  const auto model = TruncatedScaleSpace::weighted(fw.weight, k_max);
  auto iso = is_scale_isometric(space, model, spec.sorted_vectors().transpose(), tol);
  return {std::move(space), std::move(spec), std::move(fw), std::move(deviation), std::move(iso), tol};
}

inline FractalStructure build_fractal_structure(const ScaleOperator& op, int k_max, double tol = default_tolerance) {
  return build_fractal_structure(op.matrix(), k_max, tol);
}

/// ‖[A]_{e^A, <·,·>_A} - [A]_{e, <·,·>_0}‖_F: the matrix of A in the basis e_ν/√f_A(ν) with respect
/// to the graph inner product against its matrix in e_ν with respect to grade 0. Both are diag(γ).
inline double restriction_invariance(const Matrix& a, const SpectralData& spec) {
  const FractalWeight fw = fractal_weight(spec);
  const Matrix e = spec.sorted_vectors();
  const Matrix e_graph = rescaled_basis(spec, fw, 1);
  const Matrix in_graph = e_graph.transpose() * graph_gram(a) * a * e_graph;
  const Matrix in_grade0 = e.transpose() * a * e;
  return (in_graph - in_grade0).norm();
}

inline double restriction_invariance(const ScaleOperator& op) {
  return restriction_invariance(op.matrix(), spectral_decompose(op));
}

/// max over ν, μ of |<e_ν,e_μ>_A - δ_{νμ}(1 + γ_ν²)| / √(f_A(ν) f_A(μ)).
inline double pair_isometry_certificate(const Matrix& a, const SpectralData& spec) {
  const FractalWeight fw = fractal_weight(spec);
  const Matrix e = spec.sorted_vectors();
  const Matrix gram = e.transpose() * graph_gram(a) * e;
  const Vector sorted = spec.sorted_gammas();
  double worst = 0.0;
  for (Index mu = 0; mu < gram.cols(); ++mu) {
    for (Index nu = 0; nu < gram.rows(); ++nu) {
      const double expected = nu == mu ? 1.0 + sorted(nu) * sorted(nu) : 0.0;
      const double scale =
          std::exp(0.5 * (weight_log_eval(fw.weight, nu + 1) + weight_log_eval(fw.weight, mu + 1)));
      worst = std::max(worst, std::abs(gram(nu, mu) - expected) / scale);
    }
  }
  return worst;
}

inline double pair_isometry_certificate(const ScaleOperator& op) {
  return pair_isometry_certificate(op.matrix(), spectral_decompose(op));
}

} // namespace scale_hilbert
