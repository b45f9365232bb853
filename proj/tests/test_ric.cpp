#include "oracles.hpp"

#include "ompt0/constructions.hpp"
#include "ompt0/errors.hpp"
#include "ompt0/greedy.hpp"
#include "ompt0/ric.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ompt0;

namespace {

Matrix normalized_gaussian(Index m, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a(i, j) = normal(rng);
    a.col(j).normalize();
  }
  return a;
}

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

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(20, 6), 38760u);
  EXPECT_EQ(binomial(80, 10), 1646492110120u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(5, 7), 0u);
}

TEST(ExactRic, IdentityIsZero) {
  for (std::size_t order = 1; order <= 5; ++order) {
    const RicReport r = exact_ric(Matrix::Identity(5, 5), order);
    EXPECT_NEAR(r.value, 0.0, 1e-15);
    EXPECT_EQ(r.witness.size(), order);
    EXPECT_EQ(r.subsets_evaluated, binomial(5, order));
  }
}

TEST(ExactRic, SharpMatrix) {
  const RicReport r = exact_ric(build_sharp(4, 1, 1).matrix, 6);
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  EXPECT_TRUE(r.rip_holds());
}

TEST(ExactRic, DuplicatedColumns) {
  Matrix a(2, 3);
  a << 1, 1, 0, 0, 0, 1;
  const RicReport r = exact_ric(a, 2);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_EQ(r.witness, (IndexSet{0, 1}));
  EXPECT_FALSE(r.rip_holds());
}

TEST(ExactRic, MatchesSvdOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = normalized_gaussian(6, 8, seed);
    for (Index order = 1; order <= 4; ++order) {
      EXPECT_NEAR(exact_ric(a, static_cast<std::size_t>(order)).value, oracle::brute_ric(a, order), 1e-10);
    }
  }
}

TEST(ExactRic, MonotoneInOrder) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = normalized_gaussian(10, 12, 50 + seed);
    double prev = 0.0;
    for (std::size_t order = 1; order <= 6; ++order) {
      const double d = exact_ric(a, order).value;
      EXPECT_GE(d, prev - 1e-12);
      prev = d;
    }
  }
}

TEST(ExactRic, RayleighQuotientOracle) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = normalized_gaussian(12, 16, 900 + seed);
    const std::size_t k = 2 + seed % 3;
    const double delta = exact_ric(a, k).value + 1e-10;
    for (int i = 0; i < 1000; ++i) {
      const Vector u = oracle::random_sparse_unit(16, static_cast<Index>(k), rng);
      const double q = (a * u).squaredNorm();
      EXPECT_GE(q, 1.0 - delta);
      EXPECT_LE(q, 1.0 + delta);
    }
  }
}

TEST(ExactRic, WitnessAttainsValue) {
  const Matrix a = normalized_gaussian(8, 10, 3);
  const RicReport r = exact_ric(a, 3);
  const GramExtremes e = gram_extremes(select_columns(a, r.witness));
  EXPECT_NEAR(std::max(e.lambda_max - 1.0, 1.0 - e.lambda_min), r.value, 1e-14);
}

TEST(ExactRic, ThreadedMatchesSerial) {
  const Matrix a = normalized_gaussian(9, 14, 8);
  RicOptions par;
  par.threads = 4;
  const RicReport s = exact_ric(a, 5);
  const RicReport p = exact_ric(a, 5, par);
  EXPECT_EQ(s.value, p.value);
  EXPECT_EQ(s.witness, p.witness);
  EXPECT_EQ(s.subsets_evaluated, p.subsets_evaluated);
}

TEST(ExactRic, BudgetExceeded) {
  const Matrix a = normalized_gaussian(20, 80, 1);
  try {
    exact_ric(a, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    EXPECT_NE(std::string(e.what()).find("1646492110120"), std::string::npos);
  }
}

TEST(ExactRic, OrderOutOfRange) {
  EXPECT_THROW(exact_ric(Matrix::Identity(3, 3), 0), Error);
  EXPECT_THROW(exact_ric(Matrix::Identity(3, 3), 4), Error);
}

TEST(SharpThreshold, Values) {
  EXPECT_NEAR(sharp_threshold(7, 0, 0), 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(sharp_threshold(4, 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(sharp_threshold(3, 2, 5), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(kind_of([] { sharp_threshold(3, 3, 0); }), ErrorKind::InvalidCounts);
}

TEST(MinMagnitude, Sufficient) {
  EXPECT_EQ(sufficient_min_magnitude(0.3, 4, 1, 0.0), 0.0);
  EXPECT_NEAR(sufficient_min_magnitude(0.0, 5, 2, 1.0), 2.0, 1e-15);
  // max{sqrt(2.5)*0.1/0.5, 0.2/sqrt(0.75)}
  EXPECT_NEAR(sufficient_min_magnitude(0.25, 4, 1, 0.1), 0.31622776601683794, 1e-14);
  EXPECT_EQ(kind_of([] { sufficient_min_magnitude(0.5, 4, 1, 0.1); }), ErrorKind::ThresholdViolated);
}

TEST(MinMagnitude, Necessary) {
  EXPECT_EQ(necessary_min_magnitude(0.3, 4, 1, 0.0), 0.0);
  EXPECT_NEAR(necessary_min_magnitude(0.0, 5, 2, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(necessary_min_magnitude(0.25, 4, 1, 0.1), 0.17320508075688773, 1e-14);
  EXPECT_EQ(kind_of([] { necessary_min_magnitude(0.6, 4, 1, 0.1); }), ErrorKind::ThresholdViolated);
}

TEST(MinMagnitude, SufficientDominatesNecessary) {
  for (std::size_t d = 1; d <= 12; ++d) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(d + 1));
    for (int i = 0; i < 50; ++i) {
      const double delta = limit * i / 50.0;
      for (double eps : {1e-3, 0.1, 1.0, 7.5}) {
        EXPECT_GE(sufficient_min_magnitude(delta, d + 2, 2, eps),
                  necessary_min_magnitude(delta, d + 2, 2, eps));
      }
    }
  }
}

TEST(LemmaGap, SharpInstanceAtThreshold) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  const LemmaGapReport r = lemma1_gap(inst.matrix, inst.signal, inst.prior, inst.prior.indices());
  EXPECT_NEAR(r.alpha1, 0.75, 1e-12);
  EXPECT_NEAR(r.beta1, 0.75, 1e-12);
  EXPECT_NEAR(r.lower_bound, 0.0, 1e-12);
  EXPECT_NEAR(r.delta, 0.5, 1e-12);
  EXPECT_EQ(r.t, 0u);
}

TEST(LemmaGap, SingleRemainingIndex) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  IndexSet current = inst.prior.indices();
  current.push_back(0);
  current.push_back(1);
  const LemmaGapReport r = lemma1_gap(inst.matrix, inst.signal, inst.prior, current, 0.3);
  EXPECT_EQ(r.t, 2u);
  // z restricted to T\Λ is x_2 = 1; the residual is the projection of column 2.
  const Vector resid =
      projection_residual(select_columns(inst.matrix, normalized(current)), inst.matrix.col(2));
  EXPECT_NEAR(r.alpha1, std::abs(inst.matrix.col(2).dot(resid)), 1e-12);
  EXPECT_NEAR(r.lower_bound, (1.0 - std::sqrt(2.0) * 0.3) * r.z_norm, 1e-12);
}

TEST(LemmaGap, GaussianCompliant) {
  std::mt19937_64 rng(1);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix a = normalized_gaussian(60, 10, 40 + seed);
    const double delta = exact_ric(a, 5).value;
    if (delta >= sharp_threshold(3, 1, 1)) continue;
    const SparseSignal x(10, IndexSet{1, 4, 7}, Vector::Ones(3));
    const PriorSupport prior(IndexSet{4, 9});
    const LemmaGapReport r = lemma1_gap(a, x, prior, prior.indices(), delta);
    EXPECT_GT(r.lower_bound, 0.0);
    EXPECT_GE(r.alpha1 - r.beta1, r.lower_bound - 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 5u);
}

TEST(LemmaGap, MalformedSupport) {
  const SharpInstance inst = build_sharp(4, 1, 1);
  // missing a prior index
  EXPECT_EQ(kind_of([&] { lemma1_gap(inst.matrix, inst.signal, inst.prior, IndexSet{3}, 0.1); }),
            ErrorKind::PreconditionViolated);
  // index outside T ∪ T0
  EXPECT_EQ(kind_of([&] { lemma1_gap(inst.matrix, inst.signal, inst.prior, IndexSet{3, 4, 5}, 0.1); }),
            ErrorKind::PreconditionViolated);
  // remainder already found
  EXPECT_EQ(kind_of([&] { lemma1_gap(inst.matrix, inst.signal, inst.prior, IndexSet{0, 1, 2, 3, 4}, 0.1); }),
            ErrorKind::PreconditionViolated);
}

TEST(ComparisonRegime, SpotValues) {
  EXPECT_TRUE(comparison_regime(19, 18, 1, 3));
  EXPECT_FALSE(comparison_regime(10, 9, 1, 3));
  EXPECT_FALSE(comparison_regime(19, 10, 1, 3));
  EXPECT_EQ(kind_of([] { comparison_regime(19, 18, 1, 2); }), ErrorKind::InvalidCounts);
}

TEST(ComparisonRegime, MatchesFloatingOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> kd(1, 80), cd(3, 6), bd(0, 60);
  std::size_t trues = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = kd(rng), c = cd(rng), b = bd(rng);
    std::uniform_int_distribution<std::size_t> gd(k / 2, k);
    const std::size_t g = gd(rng);
    const bool expected = oracle::comparison_regime(static_cast<double>(k), static_cast<double>(g),
                                                    static_cast<double>(b), static_cast<double>(c));
    EXPECT_EQ(comparison_regime(k, g, b, c), expected) << k << ' ' << g << ' ' << b << ' ' << c;
    trues += expected;
  }
  EXPECT_GT(trues, 20u);
}
