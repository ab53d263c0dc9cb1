#pragma once

// The four CLI commands as library functions returning their reports.

#include "scale_hilbert/acceptance.hpp"
#include "scale_hilbert/analysis.hpp"
#include "scale_hilbert/io.hpp"
#include "scale_hilbert/sobolev_circle.hpp"
#include "scale_hilbert/spaces.hpp"

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace scale_hilbert {

enum class Command { sobolev_demo, hessian_analyze, ladder, verify_all };

inline constexpr int exit_pass = 0;
inline constexpr int exit_certificate_failure = 1;
inline constexpr int exit_input_error = 2;

struct RunConfig {
  Command command = Command::verify_all;
  Index n = 16; // nu_max for sobolev-demo
  int k_max = 3;
  std::optional<double> tol;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = default_seed;
  std::vector<Index> ladder{64, 256, 1024};
  std::string pair = "sobolev-sigma"; // ladder subject: sobolev-sigma | identical | weight-square

  void validate() const {
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
    if (tol && !(*tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  }
};

/// Tolerance from the SCALE_HILBERT_TOL environment variable, if set and valid.
inline std::optional<double> tolerance_from_env() {
  const char* raw = std::getenv("SCALE_HILBERT_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0)) throw std::invalid_argument("SCALE_HILBERT_TOL must be a positive number");
  return v;
}

struct CommandResult {
  json report;
  std::string csv; // tabular mirror, empty when the command has none
  int exit_code = exit_pass;
};

inline int exit_code_for(const json& certificates) {
  for (const auto& c : certificates)
    if (!c.at("pass").get<bool>()) return exit_certificate_failure;
  return exit_pass;
}

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

} // namespace detail

/// Fourier Gram table, quadrature deltas, ratio trace and the per-grade σ-isomorphism constants.
inline CommandResult cmd_sobolev_demo(const RunConfig& cfg) {
  cfg.validate();
  const Index nu_max = cfg.n;
  const int k_max = cfg.k_max;
  const double oracle_tol = cfg.tol.value_or(1e-8);
  const double off_tol = cfg.tol.value_or(1e-10);
  const PeriodicTrapezoid rule(std::max<Index>(64, PeriodicTrapezoid::required_nodes(nu_max / 2, k_max)));

  json rows = json::array();
  std::ostringstream csv;
  csv << "nu,k,closed_form,quadrature,abs_delta,ratio\n";
  double worst_rel = 0.0;
  for (Index nu = 1; nu <= nu_max; ++nu) {
    for (int k = 0; k <= k_max; ++k) {
      const double closed = fourier_gram_closed_form(nu, nu, k);
      const double quad = rule.gram(nu, nu, k);
      const double delta = std::abs(closed - quad);
      const double ratio = sobolev_to_fractal_ratio(nu, k);
      worst_rel = std::max(worst_rel, delta / std::max(1.0, closed));
      rows.push_back({{"nu", nu}, {"k", k}, {"closed_form", closed}, {"quadrature", quad}, {"abs_delta", delta},
                      {"ratio", ratio}});
      csv << nu << ',' << k << ',' << detail::format_double(closed) << ',' << detail::format_double(quad) << ','
          << detail::format_double(delta) << ',' << detail::format_double(ratio) << '\n';
    }
  }

  // Off-diagonal entries on the leading block (up to 64 indices) must vanish.
  const Index block = std::min<Index>(nu_max, 64);
  double worst_off = 0.0;
  for (int k = 0; k <= k_max; ++k)
    for (Index nu = 1; nu <= block; ++nu)
      for (Index nu2 = 1; nu2 <= block; ++nu2)
        if (nu != nu2) worst_off = std::max(worst_off, std::abs(rule.gram(nu, nu2, k)));

  const auto sobolev = build_sobolev_space(nu_max, k_max);
  const auto model = TruncatedScaleSpace::weighted(sigma_weight(nu_max), k_max);
  json constants = json::array();
  bool ratios_bounded = true;
  const double upper_base = 1.0 + 4.0 * std::numbers::pi * std::numbers::pi;
  for (int k = 0; k <= k_max; ++k) {
    const auto ec = grade_equivalence_constants(sobolev, model, k);
    constants.push_back({{"k", k}, {"c_lo", ec.c_lo}, {"c_hi", ec.c_hi}});
    if (ec.c_lo < std::pow(2.0, -k) * (1.0 - 1e-12) || ec.c_hi > std::pow(upper_base, k) * (1.0 + 1e-12))
      ratios_bounded = false;
  }

  // Ratio monotone along even ν: a sanity property of the closed form, reported as warnings only.
  json warnings = json::array();
  for (int k = 0; k <= k_max; ++k) {
    for (Index nu = 4; nu <= nu_max; nu += 2) {
      if (sobolev_to_fractal_ratio(nu, k) < sobolev_to_fractal_ratio(nu - 2, k)) {
        warnings.push_back("ratio decreases along even indices at nu=" + std::to_string(nu) + ", k=" + std::to_string(k));
        break;
      }
    }
  }

  json certs = json::array();
  certs.push_back(to_json(certify("oracle_equivalence", worst_rel, oracle_tol)));
  certs.push_back(to_json(certify("off_diagonal_vanishing", worst_off, off_tol)));
  certs.push_back(to_json(Certificate{"ratio_within_bounds", ratios_bounded ? 0.0 : 1.0, 0.0, ratios_bounded}));

  CommandResult out;
  out.report = {{"command", "sobolev-demo"},
                {"nu_max", nu_max},
                {"k_max", k_max},
                {"quadrature_nodes", rule.nodes()},
                {"rows", std::move(rows)},
                {"sigma_constants", std::move(constants)},
                {"warnings", std::move(warnings)},
                {"certificates", certs}};
  out.report["pass"] = exit_code_for(certs) == exit_pass;
  out.csv = csv.str();
  out.exit_code = exit_code_for(certs);
  return out;
}

/// Full certificate pipeline for the operator in cfg.input_path.
inline CommandResult cmd_hessian_analyze(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.input_path.empty()) throw std::invalid_argument("hessian-analyze needs --input");
  const ScaleOperator op = operator_from_json(read_json_file(cfg.input_path), cfg.k_max);
  const auto analysis = analyze_operator(op, cfg.k_max, AnalysisTolerances::with_override(cfg.tol));
  CommandResult out;
  out.report = to_json(analysis);
  out.report["command"] = "hessian-analyze";
  out.report["k_max"] = cfg.k_max;
  out.exit_code = analysis.pass() ? exit_pass : exit_certificate_failure;
  if (analysis.weight) {
    std::ostringstream csv;
    csv << "nu,gamma,f_A\n";
    const Vector g = analysis.spectral->sorted_gammas();
    for (Index nu = 1; nu <= analysis.weight->weight.size(); ++nu)
      csv << nu << ',' << detail::format_double(g(nu - 1)) << ','
          << detail::format_double(std::exp(weight_log_eval(analysis.weight->weight, nu))) << '\n';
    out.csv = csv.str();
  }
  return out;
}

/// The pair of spaces compared on one rung of a ladder.
inline std::pair<TruncatedScaleSpace, TruncatedScaleSpace> ladder_pair(const std::string& pair, Index n, int k_max) {
  if (pair == "sobolev-sigma")
    return {build_sobolev_space(n, k_max), TruncatedScaleSpace::weighted(sigma_weight(n), k_max)};
  if (pair == "identical") {
    auto s = TruncatedScaleSpace::weighted(sigma_weight(n), k_max);
    return {s, s};
  }
  if (pair == "weight-square") {
    const Weight f = sigma_weight(n);
    return {TruncatedScaleSpace::weighted(f, k_max), TruncatedScaleSpace::weighted(weight_power(f, 2), k_max)};
  }
  throw std::invalid_argument("unknown ladder pair \"" + pair + "\" (expected sobolev-sigma, identical or weight-square)");
}

/// Equivalence constants per grade on every rung. A grade is flagged uniform when its spread
/// c_hi/c_lo varies by at most 5% across the ladder.
inline CommandResult cmd_ladder(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.ladder.empty()) throw std::invalid_argument("ladder needs at least one dimension");
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    if (cfg.ladder[i] < 1) throw std::invalid_argument("ladder dimensions must be positive");
    if (i > 0 && cfg.ladder[i] <= cfg.ladder[i - 1]) throw std::invalid_argument("ladder dimensions must increase");
  }
  constexpr double uniformity_band = 0.05;

  std::ostringstream csv;
  csv << "pair,n,k,c_lo,c_hi\n";
  std::vector<std::vector<EquivalenceConstants>> by_grade(static_cast<std::size_t>(cfg.k_max + 1));
  for (Index n : cfg.ladder) {
    const auto [left, right] = ladder_pair(cfg.pair, n, cfg.k_max);
    for (int k = 0; k <= cfg.k_max; ++k) {
      const auto ec = grade_equivalence_constants(left, right, k);
      by_grade[static_cast<std::size_t>(k)].push_back(ec);
      csv << cfg.pair << ',' << n << ',' << k << ',' << detail::format_double(ec.c_lo) << ','
          << detail::format_double(ec.c_hi) << '\n';
    }
  }

  json grades = json::array();
  json certs = json::array();
  bool finite = true;
  for (int k = 0; k <= cfg.k_max; ++k) {
    const auto& rungs = by_grade[static_cast<std::size_t>(k)];
    json rung_json = json::array();
    double spread_min = std::numeric_limits<double>::infinity();
    double spread_max = 0.0;
    double lo_min = std::numeric_limits<double>::infinity(), hi_max = 0.0;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
      const double spread = rungs[i].c_hi / rungs[i].c_lo;
      spread_min = std::min(spread_min, spread);
      spread_max = std::max(spread_max, spread);
      lo_min = std::min(lo_min, rungs[i].c_lo);
      hi_max = std::max(hi_max, rungs[i].c_hi);
      if (!(rungs[i].c_lo > 0.0) || !std::isfinite(rungs[i].c_hi)) finite = false;
      rung_json.push_back({{"n", cfg.ladder[i]}, {"c_lo", rungs[i].c_lo}, {"c_hi", rungs[i].c_hi}, {"spread", spread}});
    }
    const double growth = spread_max / spread_min;
    grades.push_back({{"k", k},
                      {"rungs", std::move(rung_json)},
                      {"envelope", {{"c_lo", lo_min}, {"c_hi", hi_max}}},
                      {"spread_growth", growth},
                      {"uniform", growth - 1.0 <= uniformity_band}});
  }
  certs.push_back(to_json(Certificate{"constants_finite_and_positive", finite ? 0.0 : 1.0, 0.0, finite}));

  CommandResult out;
  out.report = {{"command", "ladder"},
                {"pair", cfg.pair},
                {"ladder", cfg.ladder},
                {"k_max", cfg.k_max},
                {"uniformity_band", uniformity_band},
                {"grades", std::move(grades)},
                {"certificates", certs}};
  out.exit_code = exit_code_for(certs);
  out.report["pass"] = out.exit_code == exit_pass;
  out.csv = csv.str();
  return out;
}

/// Criteria 1-8 as one JSON array (the unit compared by the determinism criterion).
inline json run_computational_criteria(const AcceptanceOptions& opts) {
  json out = json::array();
  for (const auto fn : computational_criteria()) out.push_back(to_json(fn(opts)));
  return out;
}

/// Every acceptance criterion; criterion 9 reruns 1-8 and compares the serialized results.
inline CommandResult cmd_verify_all(const RunConfig& cfg) {
  cfg.validate();
  const AcceptanceOptions opts{cfg.seed, cfg.tol};
  json criteria = run_computational_criteria(opts);
  const std::string first = criteria.dump();
  bool first_call = true;
  const auto determinism = criterion_determinism([&] {
    if (first_call) {
      first_call = false;
      return first;
    }
    return run_computational_criteria(opts).dump();
  });
  criteria.push_back(to_json(determinism));

  json certs = json::array();
  for (const auto& c : criteria)
    certs.push_back({{"name", c.at("name")}, {"defect", c.at("defect")}, {"tolerance", c.at("tolerance")},
                     {"pass", c.at("pass")}});
  CommandResult out;
  out.exit_code = exit_code_for(certs);
  out.report = {{"command", "verify-all"},
                {"seed", cfg.seed},
                {"criteria", std::move(criteria)},
                {"pass", out.exit_code == exit_pass}};
  return out;
}

inline CommandResult run_command(const RunConfig& cfg) {
  switch (cfg.command) {
  case Command::sobolev_demo: return cmd_sobolev_demo(cfg);
  case Command::hessian_analyze: return cmd_hessian_analyze(cfg);
  case Command::ladder: return cmd_ladder(cfg);
  case Command::verify_all: return cmd_verify_all(cfg);
  }
  throw std::invalid_argument("unknown command");
}

} // namespace scale_hilbert
