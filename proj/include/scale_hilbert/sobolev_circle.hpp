#pragma once

// Sobolev spaces W^{k,2}(S¹) in the real Fourier basis
//
//   e_1 = 1,  e_{2m} = √2 sin(2πmt),  e_{2m+1} = √2 cos(2πmt),
//
// with the inner product <f,g>_k = Σ_{j=0..k} ∫_0^1 f^(j) g^(j) dt. In this basis every
// grade is diagonal with entries Σ_{j=0..k} (2π⌊ν/2⌋)^{2j}; comparing with σ(ν) = ν² + 1
// exhibits the scale isomorphism with ℓ^{2,σ}.
//
// The quadrature route is an independent check of the closed form. It uses the periodic
// trapezoid rule, which is exact for trigonometric polynomials below the node count, and
// accumulates in binary128: off-diagonal entries must vanish to ~1e-10 absolutely while
// the derivative amplitudes (2πm)^{2j} reach 1e13 and beyond.

#include "scale_hilbert/common.hpp"
#include "scale_hilbert/spaces.hpp"
#include "scale_hilbert/weights.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace scale_hilbert {

enum class FourierKind { constant, sine, cosine };

struct FourierBasisSpec {
  Index nu_max = 1;

  /// m = ⌊ν/2⌋.
  static Index frequency(Index nu) { return nu / 2; }

  static FourierKind kind(Index nu) {
    if (nu < 1) throw std::out_of_range("Fourier index must be at least 1");
    if (nu == 1) return FourierKind::constant;
    return nu % 2 == 0 ? FourierKind::sine : FourierKind::cosine;
  }
};

/// δ_{ν,ν'} Σ_{j=0..k} (2π⌊ν/2⌋)^{2j}, with the j = 0 term equal to 1 also when ⌊ν/2⌋ = 0.
inline double fourier_gram_closed_form(Index nu, Index nu2, int k) {
  if (nu < 1 || nu2 < 1) throw std::out_of_range("Fourier index must be at least 1");
  if (k < 0) throw std::out_of_range("grade must be nonnegative");
  if (nu != nu2) return 0.0;
  const double omega2 = std::pow(2.0 * std::numbers::pi * static_cast<double>(FourierBasisSpec::frequency(nu)), 2);
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += term;
    term *= omega2;
  }
  return sum;
}

/// log of the diagonal closed form, safe far beyond the double range of the linear value.
inline double fourier_gram_log_diagonal(Index nu, int k) {
  if (nu < 1) throw std::out_of_range("Fourier index must be at least 1");
  if (k < 0) throw std::out_of_range("grade must be nonnegative");
  const Index m = FourierBasisSpec::frequency(nu);
  if (m == 0 || k == 0) return 0.0;
  const double x = 2.0 * std::log(2.0 * std::numbers::pi * static_cast<double>(m));
  // log Σ_j e^{jx} = kx + log(1 + Σ_{i=1..k} e^{-ix})
  double tail = 0.0;
  for (int i = 1; i <= k; ++i) tail += std::exp(-i * x);
  return k * x + std::log1p(tail);
}

/// Periodic trapezoid rule on q equispaced nodes t_i = i/q with sin/cos tables in binary128.
class PeriodicTrapezoid {
public:
  explicit PeriodicTrapezoid(Index q) : q_(q), root2_(sqrtq(2)) {
    if (q < 1) throw std::invalid_argument("quadrature needs at least one node");
    sin_.resize(static_cast<std::size_t>(q));
    cos_.resize(static_cast<std::size_t>(q));
    for (Index p = 0; p < q; ++p) {
      const __float128 angle = 2 * M_PIq * static_cast<__float128>(p) / static_cast<__float128>(q);
      sin_[static_cast<std::size_t>(p)] = sinq(angle);
      cos_[static_cast<std::size_t>(p)] = cosq(angle);
    }
  }

  Index nodes() const { return q_; }

  /// Smallest admissible node count for indices up to frequency m at grade k: 4·m·(k+1).
  static Index required_nodes(Index max_frequency, int k) { return std::max<Index>(1, 4 * max_frequency * (k + 1)); }

  /// Σ_{j=0..k} (1/q) Σ_i e_ν^(j)(t_i) e_ν'^(j)(t_i), derivatives taken analytically.
  double gram(Index nu, Index nu2, int k) const {
    if (nu < 1 || nu2 < 1) throw std::out_of_range("Fourier index must be at least 1");
    if (k < 0) throw std::out_of_range("grade must be nonnegative");
    const Index m1 = FourierBasisSpec::frequency(nu);
    const Index m2 = FourierBasisSpec::frequency(nu2);
    if (q_ < required_nodes(std::max(m1, m2), k))
      throw std::invalid_argument("quadrature: " + std::to_string(q_) + " nodes are insufficient, need at least " +
                                  std::to_string(required_nodes(std::max(m1, m2), k)));
    const auto k1 = FourierBasisSpec::kind(nu);
    const auto k2 = FourierBasisSpec::kind(nu2);
    const __float128 omega1 = 2 * M_PIq * static_cast<__float128>(m1);
    const __float128 omega2 = 2 * M_PIq * static_cast<__float128>(m2);

    __float128 total = 0;
    __float128 amp1 = 1;
    __float128 amp2 = 1;
    for (int j = 0; j <= k; ++j) {
      // The constant function has no derivatives beyond order zero.
      const bool vanishes = (k1 == FourierKind::constant || k2 == FourierKind::constant) && j > 0;
      if (!vanishes) {
        __float128 acc = 0;
        for (Index i = 0; i < q_; ++i) acc += value(k1, m1, j, i) * value(k2, m2, j, i);
        total += amp1 * amp2 * acc / static_cast<__float128>(q_);
      }
      amp1 *= omega1;
      amp2 *= omega2;
    }
    return static_cast<double>(total);
  }

private:
  // Unit-amplitude j-th derivative of e_ν at node i: the √2 factor and the phase shift by jπ/2.
  __float128 value(FourierKind kind, Index m, int j, Index i) const {
    if (kind == FourierKind::constant) return 1;
    const auto p = static_cast<std::size_t>((m * i) % q_);
    const __float128 s = sin_[p];
    const __float128 c = cos_[p];
    const __float128 root2 = root2_;
    const int phase = (kind == FourierKind::sine ? j : j + 1) % 4;
    switch (phase) {
    case 0: return root2 * s;
    case 1: return root2 * c;
    case 2: return -root2 * s;
    default: return -root2 * c;
    }
  }

  Index q_;
  __float128 root2_;
  std::vector<__float128> sin_;
  std::vector<__float128> cos_;
};

inline double fourier_gram_quadrature(Index nu, Index nu2, int k, Index q) {
  return PeriodicTrapezoid(q).gram(nu, nu2, k);
}

/// σ(ν) = ν² + 1.
inline Weight sigma_weight(Index n) { return Weight::poly_plus_one(n, 2); }

/// <e_ν,e_ν>_k / σ(ν)^k, formed in the log domain.
inline double sobolev_to_fractal_ratio(Index nu, int k) {
  const double log_sigma = std::log(static_cast<double>(nu) * static_cast<double>(nu) + 1.0);
  return std::exp(fourier_gram_log_diagonal(nu, k) - k * log_sigma);
}

/// Diagonal scale space whose grade k has weight <e_ν,e_ν>_k at ν = 1..nu_max.
inline TruncatedScaleSpace build_sobolev_space(Index nu_max, int k_max) {
  if (nu_max < 1) throw std::invalid_argument("nu_max must be at least 1");
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  std::vector<GradeDescriptor> grades;
  for (int k = 0; k <= k_max; ++k) {
    std::vector<double> logs(static_cast<std::size_t>(nu_max));
    for (Index nu = 1; nu <= nu_max; ++nu) logs[static_cast<std::size_t>(nu - 1)] = fourier_gram_log_diagonal(nu, k);
    grades.emplace_back(DiagonalGrade{Weight(std::move(logs), "sobolev W^{" + std::to_string(k) + ",2}")});
  }
  return TruncatedScaleSpace(nu_max, std::move(grades));
}

} // namespace scale_hilbert
