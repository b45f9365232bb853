#pragma once

// Monte Carlo experiments over random sensing matrices: recovery sweeps,
// noisy bound checks, and prior-quality comparisons.
//
// Every trial draws from its own generator seeded by (seed, config index,
// trial index), so results do not depend on thread count or scheduling.

#include "ompt0/greedy.hpp"
#include "ompt0/matrix_core.hpp"
#include "ompt0/ric.hpp"
#include "ompt0/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ompt0 {

enum class MatrixFamily {
  GaussianNormalizedColumns,  // N(0,1) entries, columns scaled to unit norm
  GaussianRaw,                // N(0, 1/m) entries
  Identity,                   // requires rows == cols; for testing
};

struct EnsembleSpec {
  Index rows = 1;
  Index cols = 1;
  MatrixFamily family = MatrixFamily::GaussianNormalizedColumns;
  std::uint64_t seed = 0;
};

struct UnitMagnitudeRandomSign {};
struct UniformMagnitude {
  double lo = 1.0;
  double hi = 1.0;
};
using SignalModel = std::variant<UnitMagnitudeRandomSign, UniformMagnitude>;

enum class NoiseModel {
  UniformBall,         // uniform in the ε-ball
  WorstCaseDirection,  // ||v|| = ε, pushed toward the strongest wrong column
};

enum class TieKind { Lowest, Highest, Adversarial };

struct TrialConfig {
  std::size_t k = 1;
  std::size_t g = 0;
  std::size_t b = 0;
  double noise_epsilon = 0.0;
  SignalModel signal = UnitMagnitudeRandomSign{};
  std::size_t trials = 1;
  TieKind tie = TieKind::Lowest;
  bool verify_ric = false;
  NoiseModel noise = NoiseModel::UniformBall;
  /// Used by run_noisy_bound_check: min |x_i| over T is set to this multiple
  /// of the sufficient magnitude floor.
  double floor_multiplier = 1.5;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  IndexSet support;
  IndexSet prior;
  std::optional<double> exact_delta;
  bool threshold_satisfied = false;
  /// min over T \ T0 of |x_i| exceeds the sufficient floor (T0-remainder form).
  bool magnitude_condition_satisfied = false;
  bool success = false;
  bool exact_recovery = false;
  std::size_t iterations = 0;
  double error_l2 = 0.0;
  EstimateDiagnostics diagnostics;
};

/// One drawn problem instance.
struct TrialInstance {
  Matrix matrix;
  SparseSignal signal;
  PriorSupport prior;
  Vector noise;

  Vector measurements() const { return matrix * signal.dense() + noise; }
};

struct RunOptions {
  /// 0: OMP_PRIOR_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
  RicOptions ric{};
  bool keep_records = false;
};

struct SweepRow {
  TrialConfig config;
  std::size_t trials = 0;
  std::size_t compliant_trials = 0;
  double threshold_rate = 0.0;
  double success_rate = 0.0;
  double exact_rate = 0.0;
  double mean_err_l2 = 0.0;
  /// Rates over trials with exact δ below the threshold; NaN when none.
  double compliant_success_rate = 0.0;
  double compliant_exact_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Per-config trial records, ordered by trial index (when kept).
  std::vector<std::vector<TrialRecord>> records;
};

struct NoisyBoundTable {
  std::size_t trials = 0;
  std::size_t compliant = 0;
  /// Counts over compliant trials; all must be zero.
  std::size_t support_violations = 0;     // wrong selection or iterations != k - g
  std::size_t error_violations = 0;       // ||x - x̂|| > ε / sqrt(1-δ)
  std::size_t wrong_prior_violations = 0; // max_{T0\T} |x̂_i| > ε / sqrt(1-δ)
  std::size_t true_prior_violations = 0;  // min_{T∩T0} |x̂_i| <= ε / sqrt(1-δ)
  /// Outside the hypotheses; reported only.
  std::size_t noncompliant_support_failures = 0;
  /// Compliant trials with at least one violation.
  std::vector<TrialRecord> violating;

  std::size_t total_violations() const {
    return support_violations + error_violations + wrong_prior_violations +
           true_prior_violations;
  }
};

struct PriorComparisonRow {
  std::size_t g = 0;
  std::size_t b = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  /// Standard OMP (T0 = ∅) on the same draws.
  double baseline_success_rate = 0.0;
};

/// Thread count from OMP_PRIOR_THREADS, else hardware concurrency.
unsigned default_thread_count();

/// Throws ConfigInfeasible if the config does not fit the ensemble.
void validate_config(const EnsembleSpec& spec, const TrialConfig& config);

Matrix draw_matrix(const EnsembleSpec& spec, std::uint64_t stream_seed);

/// The instance run_sweep uses for (config_index, trial_index).
TrialInstance draw_trial(const EnsembleSpec& spec, const TrialConfig& config,
                         std::size_t config_index, std::size_t trial_index);

TieBreakPolicy make_tie_policy(TieKind kind, const SparseSignal& truth, const PriorSupport& prior);

/// Throws TheoremGateViolated with an instance dump if a noiseless trial with
/// exact δ below the threshold fails to recover.
SweepResult run_sweep(const EnsembleSpec& spec, const std::vector<TrialConfig>& configs,
                      const RunOptions& options = {});

NoisyBoundTable run_noisy_bound_check(const EnsembleSpec& spec, const TrialConfig& config,
                                      const RunOptions& options = {});

std::vector<PriorComparisonRow> prior_value_comparison(const EnsembleSpec& spec, std::size_t k,
                                                       const std::vector<std::size_t>& g_values,
                                                       std::size_t b, std::size_t trials,
                                                       const RunOptions& options = {});

inline constexpr const char* kSweepCsvHeader =
    "k,g,b,epsilon,trials,threshold_rate,success_rate,exact_rate,mean_err_l2";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_trial_csv(std::ostream& out, const SweepResult& result);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

}  // namespace ompt0
