#include "oracles.hpp"

#include "ompt0/constructions.hpp"
#include "ompt0/errors.hpp"
#include "ompt0/matrix_core.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ompt0;

namespace {

Matrix gaussian(Index m, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = normal(rng);
  return a;
}

Vector gaussian_vector(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(m);
  for (Index i = 0; i < m; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

TEST(LeastSquares, SingleOrthonormalColumn) {
  Matrix b(2, 1);
  b << 1, 0;
  Vector y(2);
  y << 3, 5;
  const Vector u = least_squares(b, y);
  ASSERT_EQ(u.size(), 1);
  EXPECT_DOUBLE_EQ(u(0), 3.0);
}

TEST(LeastSquares, Identity) {
  Vector y(3);
  y << 1, 2, 3;
  EXPECT_LE((least_squares(Matrix::Identity(3, 3), y) - y).norm(), 1e-15);
}

TEST(LeastSquares, SharpColumnsMatchExplicitInverse) {
  const SharpInstance inst = build_sharp(2, 1, 0);
  // 0-based columns 1 and 2 carry the signal's second entry and the outside column.
  const IndexSet cols{1, 2};
  const Matrix b = select_columns(inst.matrix, cols);
  Vector x(3);
  x << 1, 1, 0;
  const Vector y = inst.matrix * x;
  const Vector u = least_squares(b, y);
  const Vector ref = oracle::solve_2x2(b, y);
  EXPECT_NEAR(u(0), ref(0), 1e-12);
  EXPECT_NEAR(u(1), ref(1), 1e-12);
}

TEST(LeastSquares, RecoversCoefficientsOnSupport) {
  const SharpInstance inst = build_sharp(2, 1, 0);
  const IndexSet cols{0, 1};
  Vector x(3);
  x << 1, 1, 0;
  const Vector u = least_squares(select_columns(inst.matrix, cols), inst.matrix * x);
  EXPECT_NEAR(u(0), 1.0, 1e-12);
  EXPECT_NEAR(u(1), 1.0, 1e-12);
}

TEST(LeastSquares, RankDeficientThrows) {
  Matrix b(3, 2);
  b << 1, 2, 1, 2, 1, 2;
  try {
    least_squares(b, Vector::Ones(3));
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
  }
}

TEST(LeastSquares, MoreColumnsThanRowsIsRankDeficient) {
  try {
    least_squares(gaussian(2, 3, 1), Vector::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
  }
}

TEST(LeastSquares, DimensionMismatch) {
  try {
    least_squares(Matrix::Identity(3, 3), Vector::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(LeastSquares, Minimality) {
  std::mt19937_64 rng(11);
  const Matrix b = gaussian(12, 5, 3);
  const Vector y = gaussian_vector(12, rng);
  const Vector u = least_squares(b, y);
  const double best = (y - b * u).norm();
  for (int trial = 0; trial < 100; ++trial) {
    Vector du = gaussian_vector(5, rng);
    du *= 1e-3 / du.norm();
    EXPECT_GE((y - b * (u + du)).norm(), best - 1e-12);
  }
}

TEST(ProjectionResidual, EmptyBasis) {
  Vector y(2);
  y << 1, 2;
  EXPECT_EQ(projection_residual(Matrix(2, 0), y), y);
}

TEST(ProjectionResidual, FullSquareBasisGivesZero) {
  Vector y(2);
  y << -4, 7;
  EXPECT_LE(projection_residual(Matrix::Identity(2, 2), y).norm(), 1e-15);
}

TEST(ProjectionResidual, SharpInstanceInitialResidual) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  const Vector r = projection_residual(select_columns(inst.matrix, inst.prior.indices()),
                                       inst.measurements());
  ASSERT_EQ(r.size(), 6);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(r(i), std::sqrt(0.75), 1e-12);
  for (Index i = 3; i < 6; ++i) EXPECT_NEAR(r(i), 0.0, 1e-12);
}

TEST(ProjectionResidual, OrthogonalToBasis) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 6 + trial % 10;
    const Index n = 1 + trial % 6;
    const Matrix b = gaussian(m, n, 100 + static_cast<std::uint64_t>(trial));
    const Vector y = gaussian_vector(m, rng);
    const Vector r = projection_residual(b, y);
    EXPECT_LE((b.transpose() * r).lpNorm<Eigen::Infinity>(), 1e-10 * y.norm());
  }
}

TEST(ProjectionResidual, Idempotent) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix b = gaussian(10, 4, 200 + static_cast<std::uint64_t>(trial));
    const Vector y = gaussian_vector(10, rng);
    const Vector r = projection_residual(b, y);
    EXPECT_LE((projection_residual(b, r) - r).norm(), 1e-12);
  }
}

TEST(GramExtremes, Identity) {
  const GramExtremes e = gram_extremes(Matrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(e.lambda_min, 1.0);
  EXPECT_DOUBLE_EQ(e.lambda_max, 1.0);
}

TEST(GramExtremes, Diagonal) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 1;
  const GramExtremes e = gram_extremes(d);
  EXPECT_NEAR(e.lambda_min, 1.0, 1e-15);
  EXPECT_NEAR(e.lambda_max, 4.0, 1e-15);
}

TEST(GramExtremes, SharpMatrix) {
  const GramExtremes e = gram_extremes(build_sharp(4, 1, 1).matrix);
  EXPECT_NEAR(e.lambda_min, 0.5, 1e-12);
  EXPECT_NEAR(e.lambda_max, 1.5, 1e-12);
}

TEST(GramExtremes, OrthonormalColumns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(9, 4, seed)).householderQ() *
                     Matrix::Identity(9, 4);
    const GramExtremes e = gram_extremes(q);
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-12);
    EXPECT_NEAR(e.lambda_max, 1.0, 1e-12);
  }
}

TEST(GramExtremes, NonNegativeAndOrdered) {
  Matrix a(2, 3);
  a << 1, 1, 0, 0, 0, 1;
  const GramExtremes e = gram_extremes(a);
  EXPECT_GE(e.lambda_min, 0.0);
  EXPECT_LE(e.lambda_min, e.lambda_max);
}

TEST(GramSpectrum, Ascending) {
  const Vector s = gram_spectrum(gaussian(7, 5, 42));
  for (Index i = 1; i < s.size(); ++i) EXPECT_LE(s(i - 1), s(i));
}

TEST(SelectColumns, PicksInOrder) {
  const Matrix a = gaussian(4, 6, 7);
  const IndexSet s{5, 0, 3};
  const Matrix sub = select_columns(a, s);
  ASSERT_EQ(sub.cols(), 3);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(sub.col(j), a.col(s[static_cast<std::size_t>(j)]));
}
