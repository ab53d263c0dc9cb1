// Acceptance suite: one test per criterion, each printing a single PASS/FAIL line with the
// measured defect, its threshold and the wall time. Thresholds are the pinned defaults.

#include "scale_hilbert/commands.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace scale_hilbert;

namespace {

std::vector<std::string> summary;

struct Timed {
  CriterionResult result;
  double seconds;
};

template <typename F>
Timed timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = f();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(r), elapsed.count()};
}

// limit <= 0 means the criterion states no runtime bound.
void report(const Timed& t, double limit) {
  const bool in_time = limit <= 0.0 || t.seconds < limit;
  const bool ok = t.result.pass && in_time;
  char line[256];
  std::snprintf(line, sizeof line, "[%s] AC%d %-42s defect=%.3e tol=%.1e time=%.2fs%s", ok ? "PASS" : "FAIL",
                t.result.id, t.result.name.c_str(), t.result.defect, t.result.tolerance, t.seconds,
                limit > 0.0 ? (" (limit " + std::to_string(static_cast<int>(limit)) + "s)").c_str() : "");
  std::puts(line);
  std::fflush(stdout);
  summary.emplace_back(line);
  EXPECT_TRUE(t.result.pass) << to_json(t.result).dump();
  if (limit > 0.0) EXPECT_LT(t.seconds, limit);
}

const AcceptanceOptions options{default_seed, std::nullopt};

} // namespace

TEST(Acceptance, AC1_SobolevOracleEquivalence) { report(timed([] { return criterion_sobolev_oracle(options); }), 10.0); }

TEST(Acceptance, AC2_SigmaIsomorphismWitness) { report(timed([] { return criterion_sigma_witness(options); }), 5.0); }

TEST(Acceptance, AC3_KernelCokernelCoincidence) { report(timed([] { return criterion_kernel_cokernel(options); }), 30.0); }

TEST(Acceptance, AC4_ResolventAdjointAndNormality) {
  report(timed([] { return criterion_resolvent_normality(options); }), 60.0);
}

TEST(Acceptance, AC5_ResolventEigenvaluesAndReconstruction) {
  report(timed([] { return criterion_eigen_consistency(options); }), 0.0);
}

TEST(Acceptance, AC6_FractalStructureCertificate) {
  report(timed([] { return criterion_fractal_certificate(options); }), 10.0);
}

TEST(Acceptance, AC7_RestrictionInvariance) { report(timed([] { return criterion_restriction(options); }), 0.0); }

TEST(Acceptance, AC8_FractalWeightRoundtrip) { report(timed([] { return criterion_roundtrip(options); }), 0.0); }

TEST(Acceptance, AC9_DeterministicVerifyAllReports) {
  RunConfig cfg;
  cfg.command = Command::verify_all;
  report(timed([&] { return criterion_determinism([&] { return cmd_verify_all(cfg).report.dump(2); }); }), 0.0);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  const int status = RUN_ALL_TESTS();
  std::puts("\n==== acceptance summary ====");
  for (const auto& line : summary) std::puts(line.c_str());
  return status;
}
