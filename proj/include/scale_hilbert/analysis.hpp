#pragma once

// Full certificate pipeline for one operator, as emitted by `hessian-analyze`.

#include "scale_hilbert/hessian.hpp"
#include "scale_hilbert/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scale_hilbert {

struct Certificate {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline Certificate certify(std::string name, double defect, double tolerance) {
  return {std::move(name), defect, tolerance, defect <= tolerance};
}

inline json to_json(const Certificate& c) {
  return {{"name", c.name}, {"defect", c.defect}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

/// Pinned thresholds of the individual checks; with_override() replaces all of them at once.
struct AnalysisTolerances {
  double symmetry = 1e-8;
  double subspace_angle = 1e-8;
  double resolvent_residual = 1e-10;
  double normality = 1e-10;
  double orthogonality = 1e-10;
  double reconstruction = 1e-10;
  double eigen_consistency = 1e-8;
  double fractal_grade = 1e-8;
  double restriction = 1e-10;
  double pair_isometry = 1e-10;

  static AnalysisTolerances with_override(std::optional<double> tol) {
    AnalysisTolerances t;
    if (tol) {
      t.symmetry = t.subspace_angle = t.resolvent_residual = t.normality = t.orthogonality = *tol;
      t.reconstruction = t.eigen_consistency = t.fractal_grade = t.restriction = t.pair_isometry = *tol;
    }
    return t;
  }
};

struct HessianAnalysis {
  Index n = 0;
  std::vector<Certificate> certificates;
  bool halted = false;
  std::string halt_reason;
  std::optional<KernelCokernel> kernel;
  std::optional<GraphEquivalence> graph_equivalence;
  std::vector<double> regularity; // by grade n = 0..k_max-1
  std::optional<SpectralData> spectral;
  std::optional<FractalWeight> weight;

  bool pass() const {
    if (halted) return false;
    return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.pass; });
  }
};

/// Runs every check in order; a failed symmetry check stops the pipeline with what was gathered so far.
inline HessianAnalysis analyze_operator(const ScaleOperator& op, int k_max, const AnalysisTolerances& tol = {}) {
  HessianAnalysis out;
  out.n = op.dimension();
  const Matrix& a = op.matrix();

  const auto sym = check_symmetry(a, tol.symmetry);
  out.certificates.push_back(certify("symmetry", sym.defect, tol.symmetry));
  if (!sym.pass) {
    out.halted = true;
    out.halt_reason = "symmetry axiom fails; the operator is not a scale Hessian";
    return out;
  }

  const auto kc = check_kernel_cokernel(a);
  out.kernel = kc;
  out.certificates.push_back(certify("kernel_equals_cokernel", kc.subspace_angle, tol.subspace_angle));
  out.certificates.push_back(certify("fredholm_index_zero", std::abs(static_cast<double>(kc.index())), 0.0));

  const auto r = resolvent(a);
  out.certificates.push_back(certify("resolvent_residual", r.residual, tol.resolvent_residual));
  const auto nd = normality_defect(r);
  out.certificates.push_back(certify("resolvent_adjoint", nd.adjoint_defect, tol.normality));
  out.certificates.push_back(certify("resolvent_normality", nd.commutator_defect, tol.normality));

  if (op.scale().k_max() >= 1) {
    const auto ge = graph_equivalence_constants(op);
    out.graph_equivalence = ge;
    const bool ok = ge.c_lo > 0.0 && ge.c_lo <= ge.c_hi && std::isfinite(ge.c_hi) && std::isfinite(ge.c_step1);
    // Only finiteness and ordering of the constants are contractual; their values are reported separately.
    out.certificates.push_back(certify("graph_norm_equivalence", ok ? 0.0 : 1.0, 0.0));
  }
  for (int g = 0; g + 1 <= op.scale().k_max(); ++g) out.regularity.push_back(regularity_constant(op, g));

  auto spec = spectral_decompose(a, tol.symmetry);
  out.certificates.push_back(certify("eigenvector_orthogonality", spec.orthogonality_residual, tol.orthogonality));
  out.certificates.push_back(certify("spectral_reconstruction", spec.reconstruction_residual, tol.reconstruction));
  out.certificates.push_back(certify("resolvent_eigenvalues_gamma", spec.resolvent_check.gamma_defect, tol.eigen_consistency));
  out.certificates.push_back(certify("resolvent_eigenvalues_mu", spec.resolvent_check.mu_defect, tol.eigen_consistency));

  const auto fs = build_fractal_structure(a, k_max, tol.fractal_grade);
  for (std::size_t k = 0; k < fs.grade_deviation.size(); ++k)
    out.certificates.push_back(certify("fractal_grade_" + std::to_string(k), fs.grade_deviation[k], tol.fractal_grade));
  const double iso = fs.isometry.defects.empty()
                         ? 0.0
                         : *std::max_element(fs.isometry.defects.begin(), fs.isometry.defects.end());
  out.certificates.push_back(certify("scale_isometry_to_weighted_model", iso, tol.fractal_grade));

  out.certificates.push_back(certify("restriction_invariance", restriction_invariance(a, spec), tol.restriction));
  out.certificates.push_back(certify("pair_isometry", pair_isometry_certificate(a, spec), tol.pair_isometry));

  out.weight = fractal_weight(spec);
  out.spectral = std::move(spec);
  return out;
}

inline json to_json(const HessianAnalysis& a) {
  json certs = json::array();
  for (const auto& c : a.certificates) certs.push_back(to_json(c));
  json j{{"n", a.n}, {"certificates", std::move(certs)}, {"halted", a.halted}};
  if (a.halted) j["halt_reason"] = a.halt_reason;
  if (a.kernel) {
    j["kernel"] = {{"ker_dim", a.kernel->ker_dim},
                   {"coker_dim", a.kernel->coker_dim},
                   {"index", a.kernel->index()},
                   {"subspace_angle", a.kernel->subspace_angle}};
  }
  if (a.graph_equivalence) {
    j["graph_equivalence"] = {{"c_lo", a.graph_equivalence->c_lo},
                              {"c_hi", a.graph_equivalence->c_hi},
                              {"c_step1", a.graph_equivalence->c_step1}};
  }
  if (!a.regularity.empty()) j["regularity_constants"] = a.regularity;
  if (a.spectral) {
    const Vector g = a.spectral->sorted_gammas();
    j["gammas_sorted"] = std::vector<double>(g.data(), g.data() + g.size());
    std::vector<Index> order1;
    for (Index o : a.spectral->order) order1.push_back(o + 1);
    j["order"] = order1;
  }
  if (a.weight) {
    const auto logs = a.weight->weight.log_values();
    json table = json::array();
    for (std::size_t nu = 0; nu < logs.size(); ++nu)
      table.push_back({{"nu", nu + 1}, {"f_A", std::exp(logs[nu])}, {"log_f_A", logs[nu]}});
    j["fractal_weight"] = std::move(table);
  }
  j["pass"] = a.pass();
  return j;
}

} // namespace scale_hilbert
