#pragma once

// Positive monotone weights f on the indices 1..N and their integer powers f^k.
//
// A Weight keeps a base table of log f(ν) together with an integer exponent, so
// log f^k(ν) = k * log f(ν) is formed with a single rounding from the base table
// no matter how the power was reached. Values are handed out in the log domain;
// linear values are available only while they are representable.

#include "scale_hilbert/common.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scale_hilbert {

class Weight {
public:
  Weight() = default;

  explicit Weight(std::vector<double> base_log_values, std::optional<std::string> growth_note = std::nullopt,
                  std::uint64_t exponent = 1)
      : base_log_(std::move(base_log_values)), exponent_(exponent), growth_note_(std::move(growth_note)) {}

  /// From linear values f(1..N). Nonpositive entries become non-finite logs and are
  /// reported by validate_weight().
  static Weight from_values(std::span<const double> values, std::optional<std::string> growth_note = std::nullopt) {
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      logs[i] = values[i] > 0.0 ? std::log(values[i]) : std::numeric_limits<double>::quiet_NaN();
    return Weight(std::move(logs), std::move(growth_note));
  }

  static Weight constant(Index n, double value = 1.0) {
    return Weight(std::vector<double>(static_cast<std::size_t>(n), std::log(value)), "bounded");
  }

  /// f(ν) = ν^degree + 1, e.g. σ(ν) = ν² + 1 for degree 2.
  static Weight poly_plus_one(Index n, int degree) {
    std::vector<double> logs(static_cast<std::size_t>(n));
    for (Index nu = 1; nu <= n; ++nu) {
      const double lnu = std::log(static_cast<double>(nu));
      // log(ν^d + 1) = d log ν + log1p(ν^-d), safe for large ν^d
      logs[static_cast<std::size_t>(nu - 1)] = degree * lnu + std::log1p(std::exp(-degree * lnu));
    }
    return Weight(std::move(logs), "poly_plus_one degree " + std::to_string(degree));
  }

  Index size() const { return static_cast<Index>(base_log_.size()); }
  std::uint64_t exponent() const { return exponent_; }
  const std::optional<std::string>& growth_note() const { return growth_note_; }

  /// log f(ν) for 1 ≤ ν ≤ size().
  double log_value(Index nu) const {
    check_index(nu);
    return static_cast<double>(exponent_) * base_log_[static_cast<std::size_t>(nu - 1)];
  }

  std::vector<double> log_values() const {
    std::vector<double> out(base_log_.size());
    for (std::size_t i = 0; i < base_log_.size(); ++i) out[i] = static_cast<double>(exponent_) * base_log_[i];
    return out;
  }

  Weight powered(std::uint64_t k) const { return Weight(base_log_, growth_note_, exponent_ * k); }

  friend bool operator==(const Weight& a, const Weight& b) { return a.log_values() == b.log_values(); }

private:
  void check_index(Index nu) const {
    if (nu < 1 || nu > size())
      throw std::out_of_range("weight index " + std::to_string(nu) + " outside 1.." + std::to_string(size()));
  }

  std::vector<double> base_log_;
  std::uint64_t exponent_ = 1;
  std::optional<std::string> growth_note_;
};

/// Largest log value whose exponential is a finite double.
inline const double max_representable_log = std::log(std::numeric_limits<double>::max());

inline double weight_log_eval(const Weight& w, Index nu) { return w.log_value(nu); }

/// f(ν). Throws std::overflow_error when f(ν) exceeds the double range; use weight_log_eval there.
inline double weight_eval(const Weight& w, Index nu) {
  const double lv = w.log_value(nu);
  if (lv > max_representable_log)
    throw std::overflow_error("weight value at index " + std::to_string(nu) +
                              " exceeds double range (log = " + std::to_string(lv) + ")");
  return std::exp(lv);
}

inline Weight weight_power(const Weight& w, std::uint64_t k) { return w.powered(k); }

struct WeightViolation {
  enum class Kind { non_finite, not_monotone };
  Kind kind;
  Index index; // 1-based
  std::string message;
};

struct WeightReport {
  std::vector<WeightViolation> violations;
  bool valid() const { return violations.empty(); }
};

/// Lists the first non-finite entry and the first monotonicity break, if any. Never throws.
inline WeightReport validate_weight(const Weight& w) {
  WeightReport report;
  const auto logs = w.log_values();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (!std::isfinite(logs[i])) {
      const auto nu = static_cast<Index>(i + 1);
      report.violations.push_back({WeightViolation::Kind::non_finite, nu,
                                   "weight is not finite and positive at index " + std::to_string(nu)});
      break;
    }
  }
  for (std::size_t i = 1; i < logs.size(); ++i) {
    if (logs[i] < logs[i - 1]) {
      const auto nu = static_cast<Index>(i + 1);
      report.violations.push_back({WeightViolation::Kind::not_monotone, nu,
                                   "weight decreases at index " + std::to_string(nu)});
      break;
    }
  }
  return report;
}

inline void require_valid(const Weight& w) {
  const auto report = validate_weight(w);
  if (!report.valid()) throw std::invalid_argument("invalid weight: " + report.violations.front().message);
}

} // namespace scale_hilbert
