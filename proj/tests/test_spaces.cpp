#include "scale_hilbert/random.hpp"
#include "scale_hilbert/sobolev_circle.hpp"
#include "scale_hilbert/spaces.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace scale_hilbert;

namespace {

GradedVector unit(Index n, Index nu) {
  GradedVector v{Vector::Zero(n), 0};
  v.coords(nu - 1) = 1.0;
  return v;
}

TruncatedScaleSpace sigma_scale(Index n, int k_max) { return TruncatedScaleSpace::weighted(sigma_weight(n), k_max); }

TruncatedScaleSpace gram_space(std::vector<Matrix> grams) {
  const Index n = grams.front().rows();
  std::vector<GradeDescriptor> grades;
  for (auto& g : grams) grades.emplace_back(GramGrade{std::move(g)});
  return TruncatedScaleSpace(n, std::move(grades));
}

} // namespace

TEST(TruncatedScaleSpace, RejectsNonSpdGram) {
  Matrix g = Matrix::Identity(3, 3);
  g(2, 2) = -1.0;
  EXPECT_THROW(gram_space({Matrix::Identity(3, 3), g}), not_spd_error);
}

TEST(TruncatedScaleSpace, RejectsInvalidWeight) {
  const std::vector<double> values{2.0, 1.0};
  std::vector<GradeDescriptor> grades{DiagonalGrade{Weight::from_values(values)}};
  EXPECT_THROW(TruncatedScaleSpace(2, grades), std::invalid_argument);
}

TEST(TruncatedScaleSpace, WeightedGradeZeroIsConstantOne) {
  const auto s = sigma_scale(10, 3);
  EXPECT_TRUE(s.gram(0).isIdentity(0.0));
}

TEST(InnerProduct, SigmaUnitVectorAtThree) {
  const auto s = sigma_scale(5, 1);
  EXPECT_DOUBLE_EQ(inner_product(s, 1, unit(5, 3), unit(5, 3)), 10.0);
}

TEST(InnerProduct, EuclideanOrthogonality) {
  const auto s = TruncatedScaleSpace::weighted(Weight::constant(2), 0);
  const GradedVector x{Vector::Ones(2), 0};
  GradedVector y{Vector::Ones(2), 0};
  y.coords(1) = -1.0;
  EXPECT_EQ(inner_product(s, 0, x, y), 0.0);
}

TEST(InnerProduct, GramMatchesDoubleLoop) {
  SeededRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + rng.uniform_int(0, 10);
    const Matrix g = random_spd(n, rng);
    const auto s = gram_space({Matrix::Identity(n, n), g});
    const GradedVector x{random_gaussian_matrix(n, 1, rng).col(0), 1};
    const GradedVector y{random_gaussian_matrix(n, 1, rng).col(0), 1};
    double oracle = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) oracle += x.coords(i) * g(i, j) * y.coords(j);
    EXPECT_NEAR(inner_product(s, 1, x, y), oracle, 1e-12 * (1.0 + std::abs(oracle)));
    EXPECT_NEAR(inner_product(s, 1, x, y), inner_product(s, 1, y, x), 1e-12 * (1.0 + std::abs(oracle)));
  }
}

TEST(InnerProduct, Errors) {
  const auto s = sigma_scale(4, 1);
  EXPECT_THROW(inner_product(s, 2, unit(4, 1), unit(4, 1)), std::out_of_range);
  EXPECT_THROW(inner_product(s, -1, unit(4, 1), unit(4, 1)), std::out_of_range);
  EXPECT_THROW(inner_product(s, 0, unit(3, 1), unit(4, 1)), dimension_error);
}

TEST(InclusionSingularValues, SigmaGradeOne) {
  const auto s = sigma_scale(16, 1);
  const auto sv = inclusion_singular_values(s, 1);
  ASSERT_EQ(sv.size(), 16u);
  EXPECT_NEAR(sv.front(), 1.0 / std::sqrt(2.0), 1e-15);
  for (Index nu = 1; nu <= 16; ++nu)
    EXPECT_NEAR(sv[static_cast<std::size_t>(nu - 1)], 1.0 / std::sqrt(nu * nu + 1.0), 1e-15);
}

TEST(InclusionSingularValues, ConstantWeightIsIsometric) {
  const auto s = TruncatedScaleSpace::weighted(Weight::constant(7), 2);
  for (double v : inclusion_singular_values(s, 2)) EXPECT_EQ(v, 1.0);
}

TEST(InclusionSingularValues, IndependentOfGrade) {
  SeededRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(12);
    double acc = 1.0;
    for (auto& v : values) v = acc *= rng.uniform(1.0, 3.0);
    const auto s = TruncatedScaleSpace::weighted(Weight::from_values(values), 4);
    const auto base = inclusion_singular_values(s, 1);
    for (int k = 2; k <= 4; ++k) {
      const auto sv = inclusion_singular_values(s, k);
      for (std::size_t i = 0; i < sv.size(); ++i) EXPECT_NEAR(sv[i], base[i], 1e-14 * base[i]);
    }
    // Dense path agrees with the diagonal shortcut.
    const auto dense = gram_space({s.gram(0), s.gram(1)});
    const auto sv_dense = inclusion_singular_values(dense, 1);
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(sv_dense[i], base[i], 1e-12);
  }
}

TEST(InclusionSingularValues, MatchesDenseSvdOracle) {
  SeededRng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 8;
    const Matrix g0 = random_spd(n, rng);
    const Matrix g1 = random_spd(n, rng);
    const auto s = gram_space({g0, g1});
    // With G = L Lᵀ, the inclusion in orthonormal coordinates is L0ᵀ L1^{-T}.
    const Matrix l0 = g0.llt().matrixL();
    const Matrix l1 = g1.llt().matrixL();
    const Matrix factor = l0.transpose() * l1.transpose().inverse();
    const Vector oracle = Eigen::JacobiSVD<Matrix>(factor).singularValues();
    const auto sv = inclusion_singular_values(s, 1);
    for (Index i = 0; i < n; ++i) EXPECT_NEAR(sv[static_cast<std::size_t>(i)], oracle(i), 1e-12 * oracle(0));
    EXPECT_TRUE(std::is_sorted(sv.begin(), sv.end(), std::greater<>()));
  }
}

TEST(InclusionSingularValues, GradeZeroRejected) { EXPECT_THROW(inclusion_singular_values(sigma_scale(4, 2), 0), std::out_of_range); }

TEST(Shift, ZeroIsIdentity) {
  const auto s = sigma_scale(8, 3);
  const auto t = shift(s, 0);
  ASSERT_EQ(t.k_max(), 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(t.gram(k), s.gram(k));
}

TEST(Shift, OneMakesSigmaGradeZero) {
  const auto t = shift(sigma_scale(8, 3), 1);
  ASSERT_TRUE(t.is_diagonal(0));
  EXPECT_EQ(std::get<DiagonalGrade>(t.grade(0)).weight, sigma_weight(8));
  EXPECT_EQ(t.k_max(), 2);
}

TEST(Shift, GradesMoveDown) {
  const auto s = sigma_scale(8, 4);
  const auto t = shift(s, 2);
  for (int k = 0; k <= t.k_max(); ++k) EXPECT_EQ(t.gram(k), s.gram(k + 2));
}

TEST(Shift, Composes) {
  const auto s = sigma_scale(6, 5);
  for (int m1 = 0; m1 <= 5; ++m1)
    for (int m2 = 0; m1 + m2 <= 5; ++m2) {
      const auto a = shift(shift(s, m1), m2);
      const auto b = shift(s, m1 + m2);
      ASSERT_EQ(a.k_max(), b.k_max());
      for (int k = 0; k <= a.k_max(); ++k) EXPECT_EQ(a.gram(k), b.gram(k));
    }
}

TEST(Shift, TooFar) { EXPECT_THROW(shift(sigma_scale(4, 2), 3), std::out_of_range); }

TEST(EquivalenceConstants, Identity) {
  SeededRng rng(1);
  const Matrix g = random_spd(6, rng);
  const auto c = equivalence_constants(g, g);
  EXPECT_NEAR(c.c_lo, 1.0, 1e-12);
  EXPECT_NEAR(c.c_hi, 1.0, 1e-12);
}

TEST(EquivalenceConstants, Scaling) {
  SeededRng rng(2);
  const Matrix g = random_spd(6, rng);
  const auto c = equivalence_constants(4.0 * g, g);
  EXPECT_NEAR(c.c_lo, 4.0, 1e-12);
  EXPECT_NEAR(c.c_hi, 4.0, 1e-12);
}

TEST(EquivalenceConstants, RayleighSamplingOracle) {
  SeededRng rng(4);
  const Matrix ga = random_spd(6, rng);
  const Matrix gb = random_spd(6, rng);
  const auto c = equivalence_constants(ga, gb);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Vector x = random_gaussian_matrix(6, 1, rng).col(0);
    x.normalize();
    const double q = x.dot(ga * x) / x.dot(gb * x);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  EXPECT_GE(lo, c.c_lo * (1.0 - 1e-12));
  EXPECT_LE(hi, c.c_hi * (1.0 + 1e-12));
  // Attained at the extreme generalized eigenvectors.
  const auto ge = generalized_symmetric_eigen(ga, gb);
  const Vector v0 = ge.vectors.col(0);
  const Vector v5 = ge.vectors.col(5);
  EXPECT_NEAR(v0.dot(ga * v0) / v0.dot(gb * v0), c.c_lo, 1e-12 * c.c_hi);
  EXPECT_NEAR(v5.dot(ga * v5) / v5.dot(gb * v5), c.c_hi, 1e-12 * c.c_hi);
}

TEST(EquivalenceConstants, SwapInverts) {
  SeededRng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + rng.uniform_int(0, 12);
    const Matrix ga = random_spd(n, rng);
    const Matrix gb = random_spd(n, rng);
    const auto ab = equivalence_constants(ga, gb);
    const auto ba = equivalence_constants(gb, ga);
    EXPECT_NEAR(ba.c_lo, 1.0 / ab.c_hi, 1e-12 * ba.c_hi);
    EXPECT_NEAR(ba.c_hi, 1.0 / ab.c_lo, 1e-12 * ba.c_hi);
  }
}

TEST(EquivalenceConstants, RejectsNonSpd) {
  const Matrix bad = -Matrix::Identity(3, 3);
  EXPECT_THROW(equivalence_constants(bad, Matrix::Identity(3, 3)), not_spd_error);
  EXPECT_THROW(equivalence_constants(Matrix::Identity(3, 3), Matrix::Identity(4, 4)), dimension_error);
}

TEST(GradeEquivalenceConstants, DiagonalShortcutMatchesDense) {
  const auto s = sigma_scale(32, 2);
  const auto t = build_sobolev_space(32, 2);
  for (int k = 0; k <= 2; ++k) {
    const auto fast = grade_equivalence_constants(s, t, k);
    const auto dense = equivalence_constants(s.gram(k), t.gram(k));
    EXPECT_NEAR(fast.c_lo, dense.c_lo, 1e-10 * dense.c_lo);
    EXPECT_NEAR(fast.c_hi, dense.c_hi, 1e-10 * dense.c_hi);
  }
}

TEST(IsScaleIsometric, IdentityMapSameSpace) {
  SeededRng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + rng.uniform_int(0, 8);
    const auto s = gram_space({Matrix::Identity(n, n), random_spd(n, rng), random_spd(n, rng)});
    const auto rep = is_scale_isometric(s, s, Matrix::Identity(n, n));
    EXPECT_TRUE(rep.isometric);
    for (double d : rep.defects) EXPECT_EQ(d, 0.0);
  }
}

TEST(IsScaleIsometric, SigmaRescalingToConstant) {
  const Index n = 10;
  std::vector<GradeDescriptor> sg{DiagonalGrade{sigma_weight(n)}};
  std::vector<GradeDescriptor> cg{DiagonalGrade{Weight::constant(n)}};
  const TruncatedScaleSpace sigma(n, sg);
  const TruncatedScaleSpace one(n, cg);
  Vector d(n);
  for (Index nu = 1; nu <= n; ++nu) d(nu - 1) = 1.0 / std::sqrt(weight_eval(sigma_weight(n), nu));
  // Orthonormal coordinates of ℓ² → σ-weighted coordinates.
  const auto rep = is_scale_isometric(one, sigma, d.asDiagonal().toDenseMatrix());
  EXPECT_TRUE(rep.isometric);
  EXPECT_LT(rep.defects[0], 1e-15);
}

TEST(IsScaleIsometric, PermutationOfShuffledWeight) {
  SeededRng rng(10);
  const Index n = 9;
  std::vector<double> values(n);
  double acc = 1.0;
  for (auto& v : values) v = acc *= rng.uniform(1.1, 2.0);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (Index i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);

  // The shuffle is not monotone, so it lives in a Gram grade.
  const TruncatedScaleSpace s(n, {GramGrade{Matrix::Identity(n, n)}, DiagonalGrade{Weight::from_values(values)}});
  const Vector stored = s.gram(1).diagonal();
  Vector shuffled(n);
  for (Index i = 0; i < n; ++i) shuffled(i) = stored(perm[i]);
  const TruncatedScaleSpace t(n, {GramGrade{Matrix::Identity(n, n)}, GramGrade{shuffled.asDiagonal().toDenseMatrix()}});
  // map sends coordinate e_j of s to coordinate e_i of t with perm[i] = j.
  Matrix map = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) map(i, perm[i]) = 1.0;
  const auto rep = is_scale_isometric(s, t, map);
  EXPECT_TRUE(rep.isometric);
  for (double d : rep.defects) EXPECT_EQ(d, 0.0);
  if (!std::is_sorted(perm.begin(), perm.end())) EXPECT_FALSE(is_scale_isometric(s, t, Matrix::Identity(n, n)).isometric);
}

TEST(IsScaleIsometric, Errors) {
  const auto s = sigma_scale(4, 1);
  EXPECT_THROW(is_scale_isometric(s, s, Matrix::Zero(4, 4)), std::invalid_argument);
  EXPECT_THROW(is_scale_isometric(s, sigma_scale(5, 1), Matrix::Identity(4, 4)), dimension_error);
  EXPECT_THROW(is_scale_isometric(s, sigma_scale(4, 2), Matrix::Identity(4, 4)), dimension_error);
}

TEST(CommonOrthogonalBasis, IdentityPair) {
  const Matrix b = common_orthogonal_basis(Matrix::Identity(5, 5), Matrix::Identity(5, 5));
  EXPECT_TRUE((b.transpose() * b).isIdentity(1e-14));
  EXPECT_LT(off_diagonal_mass(b, Matrix::Identity(5, 5)), 1e-14);
}

TEST(CommonOrthogonalBasis, DiagonalPairGivesCoordinateBasis) {
  Vector da(4), db(4);
  da << 1.0, 5.0, 2.0, 9.0;
  db << 2.0, 1.0, 3.0, 1.5;
  const Matrix b = common_orthogonal_basis(da.asDiagonal().toDenseMatrix(), db.asDiagonal().toDenseMatrix());
  for (Index c = 0; c < 4; ++c) {
    Index nonzero = 0;
    for (Index r = 0; r < 4; ++r) nonzero += std::abs(b(r, c)) > 1e-12 ? 1 : 0;
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(CommonOrthogonalBasis, RandomPairsDiagonalize) {
  SeededRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix ga = random_spd(8, rng);
    const Matrix gb = random_spd(8, rng);
    const Matrix b = common_orthogonal_basis(ga, gb);
    EXPECT_LT(off_diagonal_mass(b, ga), 1e-10);
    EXPECT_LT(off_diagonal_mass(b, gb), 1e-10);
  }
}

TEST(CommonOrthogonalBasis, TiesKeepOriginalOrder) {
  Vector d(3);
  d << 2.0, 2.0, 2.0;
  const auto ge = generalized_symmetric_eigen(d.asDiagonal().toDenseMatrix(), Matrix::Identity(3, 3));
  EXPECT_TRUE(ge.vectors.cwiseAbs().isIdentity(1e-14));
}
