#include "scale_hilbert/random.hpp"
#include "scale_hilbert/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace scale_hilbert;

namespace {

Weight sigma16() { return Weight::poly_plus_one(16, 2); }

} // namespace

TEST(WeightEval, SigmaValues) {
  const Weight sigma = sigma16();
  EXPECT_DOUBLE_EQ(weight_eval(sigma, 3), 10.0);
  EXPECT_DOUBLE_EQ(weight_eval(sigma, 1), 2.0);
  EXPECT_NEAR(weight_eval(sigma, 16), 257.0, 1e-12);
}

TEST(WeightEval, ConstantWeightIsOne) {
  const Weight one = Weight::constant(8);
  for (Index nu = 1; nu <= 8; ++nu) EXPECT_EQ(weight_eval(one, nu), 1.0);
}

TEST(WeightEval, IndexOutOfRange) {
  const Weight sigma = sigma16();
  EXPECT_THROW(weight_eval(sigma, 0), std::out_of_range);
  EXPECT_THROW(weight_eval(sigma, 17), std::out_of_range);
  EXPECT_THROW(weight_log_eval(sigma, -1), std::out_of_range);
}

TEST(WeightEval, LogDomainBoundary) {
  // log f = 1, so f^k has log value k.
  const Weight e = Weight(std::vector<double>{1.0, 1.0});
  EXPECT_NO_THROW(weight_eval(weight_power(e, 700), 1));
  EXPECT_NEAR(std::log(weight_eval(weight_power(e, 700), 1)), 700.0, 1e-12);
  EXPECT_THROW(weight_eval(weight_power(e, 710), 1), std::overflow_error);
  EXPECT_DOUBLE_EQ(weight_log_eval(weight_power(e, 710), 2), 710.0);
}

TEST(WeightPower, ZeroIsConstantOne) {
  const Weight w = weight_power(sigma16(), 0);
  for (Index nu = 1; nu <= 16; ++nu) EXPECT_EQ(weight_eval(w, nu), 1.0);
}

TEST(WeightPower, SquareAtThree) { EXPECT_NEAR(weight_eval(weight_power(sigma16(), 2), 3), 100.0, 1e-12); }

TEST(WeightPower, FirstPowerUnchanged) { EXPECT_EQ(weight_power(sigma16(), 1), sigma16()); }

TEST(WeightPower, ComposesExactlyInLogDomain) {
  SeededRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logs(12);
    double acc = rng.uniform(-3.0, 3.0);
    for (auto& l : logs) l = acc += rng.uniform(0.0, 2.0);
    const Weight w(logs);
    const auto k1 = static_cast<std::uint64_t>(rng.uniform_int(0, 40));
    const auto k2 = static_cast<std::uint64_t>(rng.uniform_int(0, 40));
    EXPECT_EQ(weight_power(weight_power(w, k1), k2).log_values(), weight_power(w, k1 * k2).log_values());
  }
}

TEST(WeightPower, PreservesMonotonicity) {
  SeededRng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(20);
    double acc = rng.uniform(0.1, 2.0);
    for (auto& v : values) v = acc *= rng.uniform(1.0, 1.7);
    const Weight w = Weight::from_values(values);
    ASSERT_TRUE(validate_weight(w).valid());
    const auto k = static_cast<std::uint64_t>(rng.uniform_int(0, 25));
    EXPECT_TRUE(validate_weight(weight_power(w, k)).valid());
  }
}

TEST(ValidateWeight, SigmaIsValid) { EXPECT_TRUE(validate_weight(sigma16()).valid()); }

TEST(ValidateWeight, DecreaseReportedAtSecondIndex) {
  const std::vector<double> values{3.0, 2.0, 4.0};
  const auto report = validate_weight(Weight::from_values(values));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, WeightViolation::Kind::not_monotone);
  EXPECT_EQ(report.violations[0].index, 2);
}

TEST(ValidateWeight, NonFiniteReported) {
  const Weight w(std::vector<double>{0.0, std::numeric_limits<double>::infinity(), 1.0});
  const auto report = validate_weight(w);
  ASSERT_FALSE(report.valid());
  EXPECT_EQ(report.violations[0].kind, WeightViolation::Kind::non_finite);
  EXPECT_EQ(report.violations[0].index, 2);

  const std::vector<double> with_zero{1.0, 0.0};
  EXPECT_EQ(validate_weight(Weight::from_values(with_zero)).violations[0].kind, WeightViolation::Kind::non_finite);
  EXPECT_THROW(require_valid(w), std::invalid_argument);
}

TEST(Weight, PolyPlusOneLargeIndicesStayAccurate) {
  const Weight w = Weight::poly_plus_one(100000, 6);
  // log(1e30 + 1) is 30 log 10 to double precision
  EXPECT_NEAR(weight_log_eval(w, 100000), 30.0 * std::log(10.0), 1e-12);
}
