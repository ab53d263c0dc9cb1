#pragma once

// The acceptance criteria, each a self-contained seeded computation with a pinned
// threshold. `verify-all` runs them in sequence; the acceptance test binary runs them
// one by one and additionally enforces the runtime budget of each.

#include "scale_hilbert/analysis.hpp"
#include "scale_hilbert/hessian.hpp"
#include "scale_hilbert/random.hpp"
#include "scale_hilbert/sobolev_circle.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace scale_hilbert {

inline constexpr std::uint64_t default_seed = 20240611;

struct AcceptanceOptions {
  std::uint64_t seed = default_seed;
  std::optional<double> tol_override; // replaces every pinned tolerance when set
};

struct CriterionResult {
  int id = 0;
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json detail = json::object();
};

inline json to_json(const CriterionResult& c) {
  return {{"id", c.id}, {"name", c.name}, {"defect", c.defect}, {"tolerance", c.tolerance}, {"pass", c.pass},
          {"detail", c.detail}};
}

namespace acceptance {

inline double pinned(const AcceptanceOptions& o, double value) { return o.tol_override.value_or(value); }

/// 50 random symmetric operators, n in [16, 128]; every other one has a nontrivial kernel.
inline std::vector<RandomSymmetric> operator_set(std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<RandomSymmetric> ops;
  for (int i = 0; i < 50; ++i) {
    const Index n = 16 + rng.uniform_int(0, 112);
    const Index kernel = i % 2 == 0 ? rng.uniform_int(1, std::max<Index>(1, n / 8)) : 0;
    ops.push_back(random_symmetric(n, kernel, rng));
  }
  return ops;
}

/// Symmetric matrix plus a strictly upper triangular Gaussian part.
inline Matrix nonsymmetric_control(std::uint64_t seed, Index n = 16) {
  SeededRng rng(seed);
  Matrix a = random_symmetric(n, 0, rng).matrix;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) a(i, j) += rng.normal();
  return a;
}

/// 20 monotone weights f ≥ 1 on 64 indices, log-uniform excess over 1; every fourth starts at f = 1.
inline std::vector<Weight> roundtrip_weights(std::uint64_t seed, Index n = 64) {
  SeededRng rng(seed);
  std::vector<Weight> out;
  for (int w = 0; w < 20; ++w) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = 1.0 + std::pow(10.0, rng.uniform(-3.0, 6.0));
    std::sort(values.begin(), values.end());
    if (w % 4 == 0) values.front() = 1.0;
    out.push_back(Weight::from_values(values));
  }
  return out;
}

} // namespace acceptance

/// 1. Closed-form Fourier Gram against the periodic trapezoid oracle, all ν,ν' ≤ 64, k ≤ 3.
inline CriterionResult criterion_sobolev_oracle(const AcceptanceOptions& o) {
  CriterionResult r{1, "sobolev_oracle_equivalence", 0.0, acceptance::pinned(o, 1e-8)};
  const PeriodicTrapezoid rule(PeriodicTrapezoid::required_nodes(32, 3));
  double worst_diag = 0.0;
  double worst_off = 0.0;
  for (int k = 0; k <= 3; ++k) {
    for (Index nu = 1; nu <= 64; ++nu) {
      for (Index nu2 = 1; nu2 <= 64; ++nu2) {
        const double closed = fourier_gram_closed_form(nu, nu2, k);
        const double quad = rule.gram(nu, nu2, k);
        const double d = std::abs(closed - quad) / std::max(1.0, std::abs(closed));
        double& worst = nu == nu2 ? worst_diag : worst_off;
        worst = std::max(worst, d);
      }
    }
  }
  r.defect = std::max(worst_diag, worst_off);
  r.pass = r.defect <= r.tolerance;
  r.detail = {{"nodes", rule.nodes()}, {"worst_diagonal", worst_diag}, {"worst_off_diagonal", worst_off}};
  return r;
}

/// 2. Ratio <e_ν,e_ν>_k / σ(ν)^k inside [2^-k, (1+4π²)^k] for ν ≤ 4096, within 1% of π^{2k} for ν ≥ 1000.
inline CriterionResult criterion_sigma_witness(const AcceptanceOptions& o) {
  CriterionResult r{2, "sigma_isomorphism_witness", 0.0, acceptance::pinned(o, 0.01)};
  constexpr double slack = 1e-12; // rounding of exp/log at the interval endpoints
  const double upper_base = 1.0 + 4.0 * std::numbers::pi * std::numbers::pi;
  bool bounded = true;
  json per_grade = json::array();
  for (int k = 0; k <= 3; ++k) {
    const double lo = std::pow(2.0, -k);
    const double hi = std::pow(upper_base, k);
    const double limit = std::pow(std::numbers::pi, 2 * k);
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    double worst_tail = 0.0;
    for (Index nu = 1; nu <= 4096; ++nu) {
      const double ratio = sobolev_to_fractal_ratio(nu, k);
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
      if (ratio < lo * (1.0 - slack) || ratio > hi * (1.0 + slack)) bounded = false;
      if (nu >= 1000) worst_tail = std::max(worst_tail, std::abs(ratio - limit) / limit);
    }
    r.defect = std::max(r.defect, worst_tail);
    per_grade.push_back({{"k", k}, {"min_ratio", min_ratio}, {"max_ratio", max_ratio}, {"tail_deviation", worst_tail}});
  }
  r.pass = bounded && r.defect <= r.tolerance;
  r.detail = {{"within_bounds", bounded}, {"grades", per_grade}};
  return r;
}

/// 3. ker(A) = im(A)^⊥ and index 0 over the seeded operator set.
inline CriterionResult criterion_kernel_cokernel(const AcceptanceOptions& o) {
  CriterionResult r{3, "kernel_cokernel_coincidence", 0.0, acceptance::pinned(o, 1e-8)};
  bool index_zero = true;
  int kernel_mismatches = 0;
  for (const auto& op : acceptance::operator_set(o.seed)) {
    const auto kc = check_kernel_cokernel(op.matrix);
    r.defect = std::max(r.defect, kc.subspace_angle);
    if (kc.index() != 0) index_zero = false;
    if (kc.ker_dim != op.kernel_dim) ++kernel_mismatches;
  }
  r.pass = index_zero && kernel_mismatches == 0 && r.defect <= r.tolerance;
  r.detail = {{"operators", 50}, {"all_index_zero", index_zero}, {"kernel_dimension_mismatches", kernel_mismatches}};
  return r;
}

/// 4. Resolvent adjoint identity and normality at λ = i, plus the non-symmetric negative control.
inline CriterionResult criterion_resolvent_normality(const AcceptanceOptions& o) {
  CriterionResult r{4, "resolvent_adjoint_and_normality", 0.0, acceptance::pinned(o, 1e-10)};
  double worst_adjoint = 0.0;
  double worst_commutator = 0.0;
  for (const auto& op : acceptance::operator_set(o.seed)) {
    const auto nd = normality_defect(resolvent(op.matrix));
    worst_adjoint = std::max(worst_adjoint, nd.adjoint_defect);
    worst_commutator = std::max(worst_commutator, nd.commutator_defect);
  }
  constexpr double control_floor = 1e-2;
  const double control = normality_defect(resolvent(acceptance::nonsymmetric_control(o.seed + 1))).commutator_defect;
  r.defect = std::max(worst_adjoint, worst_commutator);
  r.pass = r.defect <= r.tolerance && control >= control_floor;
  r.detail = {{"worst_adjoint_defect", worst_adjoint},
              {"worst_commutator_defect", worst_commutator},
              {"negative_control_commutator_defect", control},
              {"negative_control_floor", control_floor}};
  return r;
}

/// 5. Eigenvalues of B_λ against 1/(γ_ν - λ), and the spectral reconstruction residual.
inline CriterionResult criterion_eigen_consistency(const AcceptanceOptions& o) {
  CriterionResult r{5, "resolvent_eigenvalues_and_reconstruction", 0.0, acceptance::pinned(o, 1e-8)};
  const double reconstruction_tol = acceptance::pinned(o, 1e-10);
  double worst_reconstruction = 0.0;
  double worst_gamma = 0.0;
  for (const auto& op : acceptance::operator_set(o.seed)) {
    const auto spec = spectral_decompose(op.matrix);
    r.defect = std::max(r.defect, spec.resolvent_check.mu_defect);
    worst_gamma = std::max(worst_gamma, spec.resolvent_check.gamma_defect);
    worst_reconstruction = std::max(worst_reconstruction, spec.reconstruction_residual);
  }
  r.pass = r.defect <= r.tolerance && worst_gamma <= r.tolerance && worst_reconstruction <= reconstruction_tol;
  r.detail = {{"worst_gamma_defect", worst_gamma},
              {"worst_reconstruction_residual", worst_reconstruction},
              {"reconstruction_tolerance", reconstruction_tol}};
  return r;
}

/// 6. Rescaled bases orthonormal in every grade of the graph ladder, n = 64, k ≤ 3.
inline CriterionResult criterion_fractal_certificate(const AcceptanceOptions& o) {
  CriterionResult r{6, "fractal_structure_certificate", 0.0, acceptance::pinned(o, 1e-8)};
  SeededRng rng(o.seed + 3);
  const auto op = random_symmetric(64, 0, rng);
  const auto fs = build_fractal_structure(op.matrix, 3, r.tolerance);
  r.defect = *std::max_element(fs.grade_deviation.begin(), fs.grade_deviation.end());
  r.pass = r.defect <= r.tolerance;
  r.detail = {{"grade_deviation", fs.grade_deviation}, {"isometry_defects", fs.isometry.defects}};
  return r;
}

/// 7. A on (H_1, <·,·>_A) in the basis e_ν/√f_A(ν) equals A on H_0 in e_ν.
inline CriterionResult criterion_restriction(const AcceptanceOptions& o) {
  CriterionResult r{7, "restriction_invariance", 0.0, acceptance::pinned(o, 1e-10)};
  for (const auto& op : acceptance::operator_set(o.seed))
    r.defect = std::max(r.defect, restriction_invariance(op.matrix, spectral_decompose(op.matrix)));
  r.pass = r.defect <= r.tolerance;
  r.detail = {{"operators", 50}};
  return r;
}

/// 8. f recovered from A = diag(√(f - 1)) through the fractal weight.
inline CriterionResult criterion_roundtrip(const AcceptanceOptions& o) {
  CriterionResult r{8, "fractal_weight_roundtrip", 0.0, acceptance::pinned(o, 1e-12)};
  for (const auto& f : acceptance::roundtrip_weights(o.seed + 2)) {
    Vector d(f.size());
    for (Index nu = 1; nu <= f.size(); ++nu) d(nu - 1) = std::sqrt(weight_eval(f, nu) - 1.0);
    const Matrix a = d.asDiagonal();
    const auto recovered = fractal_weight(spectral_decompose(a)).weight;
    for (Index nu = 1; nu <= f.size(); ++nu) {
      const double want = weight_eval(f, nu);
      r.defect = std::max(r.defect, std::abs(weight_eval(recovered, nu) - want) / want);
    }
  }
  r.pass = r.defect <= r.tolerance;
  r.detail = {{"weights", 20}, {"n", 64}};
  return r;
}

using CriterionFn = CriterionResult (*)(const AcceptanceOptions&);

inline const std::vector<CriterionFn>& computational_criteria() {
  static const std::vector<CriterionFn> all{criterion_sobolev_oracle,      criterion_sigma_witness,
                                            criterion_kernel_cokernel,     criterion_resolvent_normality,
                                            criterion_eigen_consistency,   criterion_fractal_certificate,
                                            criterion_restriction,         criterion_roundtrip};
  return all;
}

/// 9. Two runs of `produce` yield byte-identical output.
inline CriterionResult criterion_determinism(const std::function<std::string()>& produce) {
  const std::string first = produce();
  const std::string second = produce();
  CriterionResult r{9, "deterministic_reports", first == second ? 0.0 : 1.0, 0.0};
  r.pass = first == second;
  r.detail = {{"bytes", first.size()}};
  return r;
}

} // namespace scale_hilbert
