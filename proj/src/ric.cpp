#include "ompt0/ric.hpp"

#include "ompt0/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace ompt0 {

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // out = C(n - r + i - 1, i - 1) here, so the quotient is exact.
    const std::uint64_t num = n - r + i;
    const unsigned __int128 wide = static_cast<unsigned __int128>(out) * num / i;
    if (wide > kMax) return kMax;
    out = static_cast<std::uint64_t>(wide);
  }
  return out;
}

namespace {

struct PartialMax {
  double value = -1.0;
  std::uint64_t rank = 0;
  IndexSet witness;
  std::uint64_t evaluated = 0;
};

// Advances a sorted combination of {0..n-1}; false after the last one.
bool next_combination(IndexSet& comb, Index n) {
  const auto r = static_cast<Index>(comb.size());
  Index i = r - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - r + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < r; ++j) {
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

double subset_deviation(const Matrix& gram, const IndexSet& subset, Matrix& scratch,
                        Eigen::SelfAdjointEigenSolver<Matrix>& solver) {
  const auto r = static_cast<Index>(subset.size());
  double lo = 0.0;
  double hi = 0.0;
  if (r == 1) {
    lo = hi = gram(subset[0], subset[0]);
  } else if (r == 2) {
    const double p = gram(subset[0], subset[0]);
    const double q = gram(subset[1], subset[1]);
    const double c = gram(subset[0], subset[1]);
    const double mid = 0.5 * (p + q);
    const double rad = std::hypot(0.5 * (p - q), c);
    lo = mid - rad;
    hi = mid + rad;
  } else {
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j <= i; ++j) {
        scratch(i, j) = gram(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)]);
      }
    }
    solver.compute(scratch, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::EigenFailure, "exact_ric: eigensolve did not converge");
    }
    lo = solver.eigenvalues()(0);
    hi = solver.eigenvalues()(r - 1);
  }
  lo = std::max(lo, 0.0);
  return std::max(hi - 1.0, 1.0 - lo);
}

PartialMax scan(const Matrix& gram, std::size_t order, unsigned worker, unsigned workers) {
  PartialMax best;
  const Index n = gram.cols();
  const auto r = static_cast<Index>(order);
  IndexSet comb(order);
  for (Index i = 0; i < r; ++i) comb[static_cast<std::size_t>(i)] = i;
  Matrix scratch(r, r);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(r);
  std::uint64_t rank = 0;
  do {
    if (rank % workers == worker) {
      const double dev = subset_deviation(gram, comb, scratch, solver);
      ++best.evaluated;
      if (dev > best.value) {
        best.value = dev;
        best.rank = rank;
        best.witness = comb;
      }
    }
    ++rank;
  } while (next_combination(comb, n));
  return best;
}

}  // namespace

RicReport exact_ric(const Matrix& a, std::size_t order, const RicOptions& options) {
  require_finite_nonempty(a, "exact_ric");
  const auto n = static_cast<std::uint64_t>(a.cols());
  if (order < 1 || order > n) {
    throw Error(ErrorKind::PreconditionViolated,
                "exact_ric: order " + std::to_string(order) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  const std::uint64_t required = binomial(n, order);
  if (required > options.budget) {
    throw Error(ErrorKind::BudgetExceeded,
                "exact_ric: C(" + std::to_string(n) + ", " + std::to_string(order) + ") = " +
                    (required == std::numeric_limits<std::uint64_t>::max()
                         ? std::string(">= 2^64")
                         : std::to_string(required)) +
                    " subsets required, budget is " + std::to_string(options.budget));
  }

  const Matrix gram = a.transpose() * a;
  unsigned workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, required));

  std::vector<PartialMax> partial(workers);
  if (workers == 1) {
    partial[0] = scan(gram, order, 0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          partial[w] = scan(gram, order, w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  RicReport report;
  report.order = order;
  const PartialMax* best = nullptr;
  for (const auto& p : partial) {
    report.subsets_evaluated += p.evaluated;
    if (best == nullptr || p.value > best->value ||
        (p.value == best->value && p.rank < best->rank)) {
      best = &p;
    }
  }
  report.value = best->value;
  report.witness = best->witness;
  return report;
}

namespace {

void require_counts(std::size_t k, std::size_t g) {
  if (g >= k) {
    throw Error(ErrorKind::InvalidCounts,
                "need 0 <= g < k, got k = " + std::to_string(k) + ", g = " + std::to_string(g));
  }
}

double checked_denominator(double delta, std::size_t k, std::size_t g, double epsilon) {
  require_counts(k, g);
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::PreconditionViolated, "delta must be finite and >= 0");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::PreconditionViolated, "epsilon must be finite and >= 0");
  }
  const double root = std::sqrt(static_cast<double>(k - g + 1));
  const double denom = 1.0 - root * delta;
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::ThresholdViolated,
                "delta = " + std::to_string(delta) + " >= 1/sqrt(k-g+1) = " +
                    std::to_string(1.0 / root));
  }
  return denom;
}

}  // namespace

double sharp_threshold(std::size_t k, std::size_t g, std::size_t /*b*/) {
  require_counts(k, g);
  return 1.0 / std::sqrt(static_cast<double>(k - g + 1));
}

double sufficient_min_magnitude(double delta, std::size_t k, std::size_t g, double epsilon) {
  const double denom = checked_denominator(delta, k, g, epsilon);
  const double correlation_branch = std::sqrt(2.0 * (1.0 + delta)) * epsilon / denom;
  const double residual_branch = 2.0 * epsilon / std::sqrt(1.0 - delta);
  return std::max(correlation_branch, residual_branch);
}

double necessary_min_magnitude(double delta, std::size_t k, std::size_t g, double epsilon) {
  const double denom = checked_denominator(delta, k, g, epsilon);
  return std::sqrt(1.0 - delta) * epsilon / denom;
}

LemmaGapReport lemma1_gap(const Matrix& a, const SparseSignal& truth, const PriorSupport& prior,
                          const IndexSet& current, std::optional<double> delta,
                          const RicOptions& options) {
  require_finite_nonempty(a, "lemma1_gap");
  if (truth.dimension() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "lemma1_gap: signal dimension != columns of A");
  }
  const IndexSet& t_set = truth.support();
  const IndexSet& t0 = prior.indices();
  const IndexSet lambda = normalized(current);
  const IndexSet joint = set_union(t_set, t0);
  if (!std::includes(lambda.begin(), lambda.end(), t0.begin(), t0.end())) {
    throw Error(ErrorKind::PreconditionViolated, "lemma1_gap: T0 must be contained in Λt");
  }
  if (!std::includes(joint.begin(), joint.end(), lambda.begin(), lambda.end())) {
    throw Error(ErrorKind::PreconditionViolated, "lemma1_gap: Λt must be contained in T ∪ T0");
  }
  const std::size_t k = t_set.size();
  const std::size_t g = prior.true_count(t_set);
  const std::size_t b = prior.wrong_count(t_set);
  const std::size_t t = lambda.size() - t0.size();
  if (t + g >= k) {
    throw Error(ErrorKind::PreconditionViolated, "lemma1_gap: need t < k - g (T \\ Λt non-empty)");
  }

  LemmaGapReport out;
  out.t = t;
  if (delta) {
    out.delta = *delta;
  } else {
    const std::size_t order = std::min<std::size_t>(k + b + 1, static_cast<std::size_t>(a.cols()));
    out.delta = exact_ric(a, order, options).value;
  }

  const IndexSet remainder = set_difference(t_set, lambda);
  const Vector dense = truth.dense();
  Vector x_rem(static_cast<Index>(remainder.size()));
  for (std::size_t j = 0; j < remainder.size(); ++j) x_rem(static_cast<Index>(j)) = dense(remainder[j]);

  const Matrix a_rem = select_columns(a, remainder);
  const Matrix a_lambda = select_columns(a, lambda);
  const Vector signal_part = a_rem * x_rem;
  // z = (x_{T\Λt}, -A_Λt^† A_{T\Λt} x_{T\Λt}); A_{T∪Λt} z is the projection residual.
  const Vector pinv_part = least_squares(a_lambda, signal_part);
  const Vector residual =
      a_lambda.cols() == 0 ? signal_part : Vector(signal_part - a_lambda * pinv_part);
  out.z_norm = std::sqrt(x_rem.squaredNorm() + pinv_part.squaredNorm());

  const Vector corr = (a.transpose() * residual).cwiseAbs();
  for (Index i : remainder) out.alpha1 = std::max(out.alpha1, corr(i));
  for (Index i = 0; i < a.cols(); ++i) {
    if (!contains(joint, i)) out.beta1 = std::max(out.beta1, corr(i));
  }
  const auto left = static_cast<double>(k - g - t);
  out.lower_bound = (1.0 - std::sqrt(left + 1.0) * out.delta) * out.z_norm / std::sqrt(left);
  return out;
}

bool comparison_regime(std::size_t k, std::size_t g, std::size_t b, std::size_t c) {
  if (c < 3) {
    throw Error(ErrorKind::InvalidCounts, "comparison_regime: c must be >= 3, got " +
                                              std::to_string(c));
  }
  const std::uint64_t c2 = static_cast<std::uint64_t>(c) * c;
  const bool k_large = k + 1 > 2 * c2;                     // k > 2c² - 1
  const bool g_large = (c2 - 1) * (k + 1) <= c2 * g && g < k;  // (1 - 1/c²)(k+1) <= g < k
  const std::uint64_t half_up = (k + 1) / 2;                // ⌈k/2⌉
  const bool b_small = b >= 1 && b <= (c - 2) * half_up;
  return k_large && g_large && b_small;
}

}  // namespace ompt0
