#pragma once

// Restricted isometry constants by exhaustive subset search, and the
// closed-form recovery thresholds and magnitude floors that depend on them.

#include "ompt0/matrix_core.hpp"
#include "ompt0/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace ompt0 {

inline constexpr std::uint64_t kDefaultRicBudget = 10'000'000;

struct RicOptions {
  /// Maximum number of column subsets to enumerate.
  std::uint64_t budget = kDefaultRicBudget;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
};

struct RicReport {
  std::size_t order = 0;
  /// max over |S| = order of max(λ_max(A_S'A_S) - 1, 1 - λ_min(A_S'A_S)).
  double value = 0.0;
  /// First subset (lexicographic) attaining `value`.
  IndexSet witness;
  std::uint64_t subsets_evaluated = 0;

  /// RIP of this order holds only when value < 1.
  bool rip_holds() const noexcept { return value < 1.0; }
};

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

/// Throws BudgetExceeded (message carries the required count) when
/// C(cols, order) exceeds the budget, PreconditionViolated for a bad order.
RicReport exact_ric(const Matrix& a, std::size_t order, const RicOptions& options = {});

/// 1 / sqrt(k - g + 1). Throws InvalidCounts if g >= k.
double sharp_threshold(std::size_t k, std::size_t g, std::size_t b);

/// Floor on min |x_i| over T \ T0 that guarantees remainder-support
/// recovery with the residual stopping rule:
///   max{ sqrt(2(1+δ)) ε / (1 - sqrt(k-g+1) δ),  2ε / sqrt(1-δ) }.
/// Throws ThresholdViolated when δ >= 1/sqrt(k-g+1).
double sufficient_min_magnitude(double delta, std::size_t k, std::size_t g, double epsilon);

/// Magnitude below which remainder-support recovery can fail:
///   sqrt(1-δ) ε / (1 - sqrt(k-g+1) δ).
double necessary_min_magnitude(double delta, std::size_t k, std::size_t g, double epsilon);

/// Correlation gap of the noiseless residual at an intermediate iteration.
struct LemmaGapReport {
  /// max over T \ Λt of |<A e_i, A_{T∪Λt} z>|
  double alpha1 = 0.0;
  /// max over (T ∪ T0)^c of the same; 0 when that set is empty.
  double beta1 = 0.0;
  /// (1/sqrt(k-g-t)) (1 - sqrt(k-g-t+1) δ) ||z||_2
  double lower_bound = 0.0;
  double z_norm = 0.0;
  double delta = 0.0;
  std::size_t t = 0;
};

/// `current` is Λt with T0 ⊆ Λt ⊆ T ∪ T0 and |Λt \ T0| < k - g. When `delta`
/// is empty, δ_{k+b+1} is computed with exact_ric.
LemmaGapReport lemma1_gap(const Matrix& a, const SparseSignal& truth, const PriorSupport& prior,
                          const IndexSet& current, std::optional<double> delta = std::nullopt,
                          const RicOptions& options = {});

/// k > 2c²-1, (1 - 1/c²)(k+1) <= g < k and 1 <= b <= (c-2)⌈k/2⌉, evaluated in
/// exact integer arithmetic. Throws InvalidCounts for c < 3.
bool comparison_regime(std::size_t k, std::size_t g, std::size_t b, std::size_t c);

}  // namespace ompt0
