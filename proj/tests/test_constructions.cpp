#include "ompt0/constructions.hpp"
#include "ompt0/errors.hpp"
#include "ompt0/greedy.hpp"
#include "ompt0/ric.hpp"

#include <gtest/gtest.h>

using namespace ompt0;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(BuildSharp, TwoOneZero) {
  const SharpInstance inst = build_sharp(2, 1, 0);
  ASSERT_EQ(inst.matrix.rows(), 3);
  Vector expected(3);
  expected << 1.0 - 1.0 / std::sqrt(2.0), 1.0, 1.0 + 1.0 / std::sqrt(2.0);
  EXPECT_LE((gram_spectrum(inst.matrix) - expected).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_NEAR(exact_ric(inst.matrix, 3).value, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(BuildSharp, FourOneOne) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  Vector expected(6);
  expected << 0.5, 0.75, 0.75, 1, 1, 1.5;
  EXPECT_LE((gram_spectrum(inst.matrix) - expected).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_EQ(inst.prior.indices(), (IndexSet{3, 4}));
  EXPECT_EQ(inst.signal.support(), (IndexSet{0, 1, 2, 3}));
  EXPECT_EQ(inst.outside_index(), 5);
}

TEST(BuildSharp, FirstIterationCorrelations) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  const Vector r0 = projection_residual(select_columns(inst.matrix, inst.prior.indices()),
                                        inst.measurements());
  for (Index i : {0, 1, 2, 5}) EXPECT_NEAR(std::abs(inst.matrix.col(i).dot(r0)), 0.75, 1e-12);
}

TEST(BuildSharp, Entries) {
  const SharpInstance inst = build_sharp(3, 0, 0);
  const double d = 3.0;
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(inst.matrix(i, i), std::sqrt(d / (d + 1)), 1e-15);
    EXPECT_NEAR(inst.matrix(i, 3), 1.0 / std::sqrt((d + 1) * d), 1e-15);
  }
  EXPECT_EQ(inst.matrix(3, 3), 1.0);
}

TEST(BuildSharp, ManyShapes) {
  for (std::size_t k = 1; k <= 6; ++k)
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t b = 0; b <= 3; ++b) {
        const SharpInstance inst = build_sharp(k, g, b);
        EXPECT_LE((gram_spectrum(inst.matrix) - sharp_spectrum(k, g, b)).lpNorm<Eigen::Infinity>(),
                  1e-10);
        const RecoveryTrace t =
            omp_prior(inst.matrix, inst.measurements(), inst.prior, FixedIterations{k - g},
                      AdversarialOutside{inst.signal.support(), inst.prior.indices()});
        EXPECT_FALSE(success_check(t, inst.signal, inst.prior)) << k << ' ' << g << ' ' << b;
      }
}

TEST(BuildSharp, InvalidCounts) {
  EXPECT_EQ(kind_of([] { build_sharp(2, 2, 0); }), ErrorKind::InvalidCounts);
  EXPECT_EQ(kind_of([] { build_sharp(0, 0, 0); }), ErrorKind::InvalidCounts);
}

TEST(BuildNecessary, FourOneOne) {
  const NecessaryInstance inst = build_necessary(4, 1, 1, 0.25, 0.1);
  EXPECT_NEAR(inst.theta, 0.17320508075688773, 1e-14);
  EXPECT_NEAR(inst.mu, (1.0 - 0.25 / 2.0) * inst.theta, 1e-14);
  EXPECT_NEAR(inst.mu, 0.15155444566227676, 1e-12);
  EXPECT_NEAR(inst.eta, (2.0 - 1.0) / std::sqrt(3.0), 1e-15);

  const Matrix& u = inst.rotation;
  EXPECT_LE((u.transpose() * u - Matrix::Identity(6, 6)).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_NEAR(exact_ric(inst.matrix, 6).value, 0.25, 1e-9);
  EXPECT_LE(inst.noise.norm(), 0.1);

  const Vector y = inst.measurements();
  const Vector r0 = projection_residual(select_columns(inst.matrix, inst.prior.indices()), y);
  double inside = 0.0;
  for (Index i : {0, 1, 2}) inside = std::max(inside, std::abs(inst.matrix.col(i).dot(r0)));
  const double outside = inst.matrix.col(5).dot(r0);
  EXPECT_NEAR(inside, 0.15155444566227676, 1e-12);
  EXPECT_NEAR(outside, -(3.0 / 2.0) * 0.25 * inst.theta - std::sqrt(0.75) * 0.1, 1e-12);
  EXPECT_NEAR(inside, std::abs(outside), 1e-9 * inst.theta);
}

TEST(BuildNecessary, OrthogonalityFacts) {
  const NecessaryInstance inst = build_necessary(6, 2, 2, 0.15, 0.05);
  const Matrix a_t0 = select_columns(inst.matrix, inst.prior.indices());
  const IndexSet rem{0, 1, 2, 3};
  const Vector ax = select_columns(inst.matrix, rem) * Vector::Constant(4, inst.theta);
  EXPECT_LE((a_t0.transpose() * ax).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE((a_t0.transpose() * inst.noise).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(BuildNecessary, AdversarialPicksWrongIndex) {
  const NecessaryInstance inst = build_necessary(6, 2, 2, 0.15, 0.05);
  const RecoveryTrace t =
      omp_prior(inst.matrix, inst.measurements(), inst.prior, FixedIterations{4},
                AdversarialOutside{inst.signal.support(), inst.prior.indices()});
  EXPECT_EQ(t.selected.front(), inst.outside_index());
}

TEST(BuildNecessary, PerturbationBreaksTie) {
  const NecessaryInstance inst = build_necessary(4, 1, 1, 0.25, 0.1);
  Vector x = inst.signal.dense();
  x.head(3) *= 1.0 + 1e-3;
  const Vector y = inst.matrix * x + inst.noise;
  const Vector r0 = projection_residual(select_columns(inst.matrix, inst.prior.indices()), y);
  double alpha = 0.0;
  for (Index i : {0, 1, 2}) alpha = std::max(alpha, std::abs(inst.matrix.col(i).dot(r0)));
  const double beta = std::abs(inst.matrix.col(5).dot(r0));
  EXPECT_GT(alpha, beta);
  const RecoveryTrace t =
      omp_prior(inst.matrix, y, inst.prior, FixedIterations{3},
                AdversarialOutside{inst.signal.support(), inst.prior.indices()});
  EXPECT_TRUE(contains(IndexSet{0, 1, 2}, t.selected.front()));
}

TEST(BuildNecessary, ZeroDelta) {
  const NecessaryInstance inst = build_necessary(3, 0, 1, 0.0, 0.2);
  EXPECT_NEAR(inst.theta, 0.2, 1e-15);
  EXPECT_LE((inst.scaling.array() - 1.0).abs().maxCoeff(), 1e-15);
}

TEST(BuildNecessary, SingleRemainder) {
  const NecessaryInstance inst = build_necessary(3, 2, 1, 0.3, 0.1);
  EXPECT_NEAR(inst.eta, std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(exact_ric(inst.matrix, 5).value, 0.3, 1e-9);
}

TEST(BuildNecessary, Errors) {
  EXPECT_EQ(kind_of([] { build_necessary(4, 4, 1, 0.1, 0.1); }), ErrorKind::InvalidCounts);
  EXPECT_EQ(kind_of([] { build_necessary(4, 1, 1, 0.5, 0.1); }), ErrorKind::ThresholdViolated);
  EXPECT_EQ(kind_of([] { build_necessary(4, 1, 1, 0.1, 0.0); }), ErrorKind::PreconditionViolated);
}

TEST(OrthonormalCompletion, UnitVector) {
  Vector v(2);
  v << 1, 0;
  const Matrix c = orthonormal_completion(v);
  ASSERT_EQ(c.rows(), 1);
  EXPECT_NEAR(std::abs(c(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(c(0, 0), 0.0, 1e-15);
}

TEST(OrthonormalCompletion, OnesInThree) {
  const Vector v = Vector::Ones(3);
  const Matrix c = orthonormal_completion(v);
  ASSERT_EQ(c.rows(), 2);
  Matrix basis(3, 3);
  basis.topRows(2) = c;
  basis.row(2) = v.transpose() / v.norm();
  EXPECT_LE((basis * basis.transpose() - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(OrthonormalCompletion, Degenerate) {
  EXPECT_EQ(orthonormal_completion(Vector::Ones(1)).rows(), 0);
  EXPECT_EQ(kind_of([] { orthonormal_completion(Vector::Zero(3)); }), ErrorKind::ZeroVector);
}

TEST(OrthonormalCompletion, Deterministic) {
  Vector v(5);
  v << 0.3, -1.2, 0.5, 2.0, 0.1;
  EXPECT_EQ(orthonormal_completion(v), orthonormal_completion(v));
}
