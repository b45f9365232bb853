#pragma once

// Orthogonal matching pursuit initialized with a prior support set T0.
// With T0 empty this is the standard OMP.

#include "ompt0/matrix_core.hpp"
#include "ompt0/signal.hpp"

#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

namespace ompt0 {

/// Correlations within this absolute distance of the maximum are tied.
inline constexpr double kTieTolerance = 1e-9;

struct FixedIterations {
  std::size_t count = 0;
};

struct ResidualThreshold {
  double epsilon = 0.0;
};

using StoppingRule = std::variant<FixedIterations, ResidualThreshold>;

struct LowestIndex {};
struct HighestIndex {};

/// Among tied maximizers prefer the lowest index outside T ∪ T0. Exists to
/// realize worst-case tie resolution on the adversarial constructions.
struct AdversarialOutside {
  IndexSet true_support;
  IndexSet prior;
};

using TieBreakPolicy = std::variant<LowestIndex, HighestIndex, AdversarialOutside>;

struct RecoveryTrace {
  /// j_1, j_2, ... in selection order; disjoint from T0.
  IndexSet selected;
  /// ||r^(t)||_2 for t = 0 .. iterations.
  std::vector<double> residual_norms;
  /// tie[t - 1] is set when iteration t had more than one maximizer.
  std::vector<bool> tie;
  /// Λ_final: T0 (sorted) followed by `selected`.
  IndexSet final_support;
  /// Dense x̂: least-squares coefficients on Λ_final, zero elsewhere.
  Vector estimate;

  std::size_t iterations() const noexcept { return selected.size(); }
};

struct EstimateDiagnostics {
  /// min over T ∩ T0 of |x̂_i|; +inf when T ∩ T0 is empty.
  double min_true_prior = std::numeric_limits<double>::infinity();
  /// max over T0 \ T of |x̂_i|; 0 when T0 \ T is empty.
  double max_wrong_prior = 0.0;
  double error_l2 = 0.0;
};

/// Runs the algorithm on y ≈ A x with Λ0 = T0. Throws EmptyDictionary,
/// DimensionMismatch, PreconditionViolated, or RankDeficient.
RecoveryTrace omp_prior(const Matrix& a, const Vector& y, const PriorSupport& prior,
                        const StoppingRule& stop, const TieBreakPolicy& tie = LowestIndex{});

/// True iff at least k - g iterations ran and each of the first k - g
/// selections lies in T \ T0.
bool success_check(const RecoveryTrace& trace, const SparseSignal& truth,
                   const PriorSupport& prior);

/// ||x̂ - x||_inf <= tol.
bool exact_recovery_check(const RecoveryTrace& trace, const SparseSignal& truth, double tol);

EstimateDiagnostics support_estimate_diagnostics(const RecoveryTrace& trace,
                                                 const SparseSignal& truth,
                                                 const PriorSupport& prior);

}  // namespace ompt0
