#include "ompt0/harness.hpp"

#include "ompt0/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace ompt0 {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t config_index,
                          std::uint64_t trial_index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ config_index) ^ (trial_index * 0x2545f4914f6cdd1dULL));
}

// Runs body(i) for i in [0, count); rethrows the failure with the lowest i.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

IndexSet sample_without_replacement(IndexSet pool, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return normalized(std::move(pool));
}

IndexSet iota_set(Index n) {
  IndexSet out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

Vector random_unit(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(m);
  do {
    for (Index i = 0; i < m; ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Vector draw_noise(const TrialInstance& inst, const TrialConfig& config, std::mt19937_64& rng) {
  const Index m = inst.matrix.rows();
  if (config.noise_epsilon == 0.0) return Vector::Zero(m);
  if (config.noise == NoiseModel::WorstCaseDirection) {
    const IndexSet& t0 = inst.prior.indices();
    const Matrix a_prior = select_columns(inst.matrix, t0);
    const Vector r0 = projection_residual(a_prior, inst.matrix * inst.signal.dense());
    const IndexSet joint = set_union(inst.signal.support(), t0);
    Index worst = -1;
    double worst_corr = -1.0;
    for (Index i = 0; i < inst.matrix.cols(); ++i) {
      if (contains(joint, i)) continue;
      const double c = std::abs(inst.matrix.col(i).dot(r0));
      if (c > worst_corr) {
        worst_corr = c;
        worst = i;
      }
    }
    if (worst >= 0) {
      Vector dir = projection_residual(a_prior, inst.matrix.col(worst));
      if (dir.norm() > 0.0) {
        const double sign = inst.matrix.col(worst).dot(r0) >= 0.0 ? 1.0 : -1.0;
        return sign * config.noise_epsilon * dir / dir.norm();
      }
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = config.noise_epsilon * std::pow(unit(rng), 1.0 / static_cast<double>(m));
  return radius * random_unit(m, rng);
}

std::string dump_instance(const TrialInstance& inst, const TrialRecord& rec) {
  std::ostringstream os;
  os.precision(17);
  os << "trial " << rec.trial_index << " delta "
     << (rec.exact_delta ? format_double(*rec.exact_delta) : std::string("n/a")) << "\nT:";
  for (Index i : rec.support) os << ' ' << i;
  os << "\nT0:";
  for (Index i : rec.prior) os << ' ' << i;
  os << "\nx: " << inst.signal.dense().transpose() << "\nA:\n" << inst.matrix << '\n';
  return os.str();
}

TrialRecord evaluate(const TrialInstance& inst, const TrialConfig& config, std::size_t trial_index,
                     std::optional<double> delta) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.support = inst.signal.support();
  rec.prior = inst.prior.indices();
  rec.exact_delta = delta;
  if (delta) {
    const double threshold = sharp_threshold(config.k, config.g, config.b);
    rec.threshold_satisfied = *delta < threshold;
    if (rec.threshold_satisfied) {
      const double floor = sufficient_min_magnitude(*delta, config.k, config.g, config.noise_epsilon);
      double min_remainder = std::numeric_limits<double>::infinity();
      const Vector dense = inst.signal.dense();
      for (Index i : set_difference(rec.support, rec.prior)) {
        min_remainder = std::min(min_remainder, std::abs(dense(i)));
      }
      rec.magnitude_condition_satisfied = min_remainder > floor;
    }
  }
  const std::size_t remainder = config.k - config.g;
  const StoppingRule stop = config.noise_epsilon == 0.0
                                ? StoppingRule{FixedIterations{remainder}}
                                : StoppingRule{ResidualThreshold{config.noise_epsilon}};
  const RecoveryTrace trace = omp_prior(inst.matrix, inst.measurements(), inst.prior, stop,
                                        make_tie_policy(config.tie, inst.signal, inst.prior));
  rec.iterations = trace.iterations();
  rec.success = success_check(trace, inst.signal, inst.prior);
  rec.exact_recovery = exact_recovery_check(trace, inst.signal, 1e-8);
  rec.diagnostics = support_estimate_diagnostics(trace, inst.signal, inst.prior);
  rec.error_l2 = rec.diagnostics.error_l2;
  return rec;
}

std::optional<double> maybe_ric(const Matrix& a, const TrialConfig& config, const RunOptions& options) {
  if (!config.verify_ric) return std::nullopt;
  RicOptions ric = options.ric;
  ric.threads = 1;
  return exact_ric(a, config.k + config.b + 1, ric).value;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("OMP_PRIOR_THREADS")) {
    unsigned value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate_config(const EnsembleSpec& spec, const TrialConfig& config) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw Error(ErrorKind::ConfigInfeasible, "ensemble dimensions must be positive");
  }
  if (spec.family == MatrixFamily::Identity && spec.rows != spec.cols) {
    throw Error(ErrorKind::ConfigInfeasible, "identity family needs rows == cols");
  }
  const auto m = static_cast<std::size_t>(spec.rows);
  const auto n = static_cast<std::size_t>(spec.cols);
  if (config.k < 1 || config.g >= config.k) {
    throw Error(ErrorKind::InvalidCounts, "need k >= 1 and g < k");
  }
  if (config.k > m || config.k + config.b > n) {
    throw Error(ErrorKind::ConfigInfeasible,
                "k = " + std::to_string(config.k) + ", b = " + std::to_string(config.b) +
                    " do not fit a " + std::to_string(m) + "x" + std::to_string(n) + " ensemble");
  }
  if (config.verify_ric && config.k + config.b + 1 > n) {
    throw Error(ErrorKind::ConfigInfeasible, "verify_ric needs k + b + 1 <= n");
  }
  if (!(config.noise_epsilon >= 0.0) || !std::isfinite(config.noise_epsilon)) {
    throw Error(ErrorKind::ConfigInfeasible, "noise epsilon must be finite and >= 0");
  }
  if (const auto* uni = std::get_if<UniformMagnitude>(&config.signal)) {
    if (!(uni->lo > 0.0) || !(uni->hi >= uni->lo) || !std::isfinite(uni->hi)) {
      throw Error(ErrorKind::ConfigInfeasible, "uniform magnitude needs 0 < lo <= hi");
    }
  }
}

Matrix draw_matrix(const EnsembleSpec& spec, std::uint64_t seed) {
  if (spec.family == MatrixFamily::Identity) return Matrix::Identity(spec.rows, spec.cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(spec.rows, spec.cols);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
  }
  if (spec.family == MatrixFamily::GaussianRaw) {
    a /= std::sqrt(static_cast<double>(spec.rows));
  } else {
    for (Index j = 0; j < a.cols(); ++j) a.col(j).normalize();
  }
  return a;
}

TrialInstance draw_trial(const EnsembleSpec& spec, const TrialConfig& config,
                         std::size_t config_index, std::size_t trial_index) {
  validate_config(spec, config);
  std::mt19937_64 rng(stream_seed(spec.seed, config_index, trial_index));
  TrialInstance inst;
  inst.matrix = draw_matrix(spec, rng());

  const IndexSet support = sample_without_replacement(iota_set(spec.cols), config.k, rng);
  const IndexSet from_support = sample_without_replacement(support, config.g, rng);
  const IndexSet outside = sample_without_replacement(
      set_difference(iota_set(spec.cols), support), config.b, rng);
  inst.prior = PriorSupport(set_union(from_support, outside));

  Vector values(static_cast<Index>(config.k));
  std::bernoulli_distribution coin(0.5);
  for (Index j = 0; j < values.size(); ++j) {
    double magnitude = 1.0;
    if (const auto* uni = std::get_if<UniformMagnitude>(&config.signal)) {
      magnitude = std::uniform_real_distribution<double>(uni->lo, uni->hi)(rng);
    }
    values(j) = coin(rng) ? magnitude : -magnitude;
  }
  inst.signal = SparseSignal(spec.cols, support, values);
  inst.noise = draw_noise(inst, config, rng);
  return inst;
}

TieBreakPolicy make_tie_policy(TieKind kind, const SparseSignal& truth, const PriorSupport& prior) {
  switch (kind) {
    case TieKind::Highest: return HighestIndex{};
    case TieKind::Adversarial: return AdversarialOutside{truth.support(), prior.indices()};
    case TieKind::Lowest: break;
  }
  return LowestIndex{};
}

SweepResult run_sweep(const EnsembleSpec& spec, const std::vector<TrialConfig>& configs,
                      const RunOptions& options) {
  for (const auto& c : configs) validate_config(spec, c);
  SweepResult result;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const TrialConfig& config = configs[ci];
    std::vector<TrialRecord> records(config.trials);
    parallel_for(config.trials, options.threads, [&](std::size_t ti) {
      const TrialInstance inst = draw_trial(spec, config, ci, ti);
      const auto delta = maybe_ric(inst.matrix, config, options);
      TrialRecord rec = evaluate(inst, config, ti, delta);
      if (rec.threshold_satisfied && config.noise_epsilon == 0.0 &&
          !(rec.success && rec.exact_recovery)) {
        throw Error(ErrorKind::TheoremGateViolated,
                    "noiseless trial below the sharp threshold failed to recover\n" +
                        dump_instance(inst, rec));
      }
      records[ti] = std::move(rec);
    });

    SweepRow row;
    row.config = config;
    row.trials = config.trials;
    std::size_t thr = 0, succ = 0, exact = 0, c_succ = 0, c_exact = 0;
    double err = 0.0;
    for (const auto& r : records) {
      thr += r.threshold_satisfied;
      succ += r.success;
      exact += r.exact_recovery;
      err += r.error_l2;
      if (r.threshold_satisfied) {
        c_succ += r.success;
        c_exact += r.exact_recovery;
      }
    }
    const auto total = static_cast<double>(std::max<std::size_t>(config.trials, 1));
    row.compliant_trials = thr;
    row.threshold_rate = static_cast<double>(thr) / total;
    row.success_rate = static_cast<double>(succ) / total;
    row.exact_rate = static_cast<double>(exact) / total;
    row.mean_err_l2 = err / total;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.compliant_success_rate = thr ? static_cast<double>(c_succ) / static_cast<double>(thr) : nan;
    row.compliant_exact_rate = thr ? static_cast<double>(c_exact) / static_cast<double>(thr) : nan;
    result.rows.push_back(row);
    if (options.keep_records) result.records.push_back(std::move(records));
  }
  return result;
}

NoisyBoundTable run_noisy_bound_check(const EnsembleSpec& spec, const TrialConfig& config,
                                      const RunOptions& options) {
  validate_config(spec, config);
  if (!(config.floor_multiplier > 0.0)) {
    throw Error(ErrorKind::ConfigInfeasible, "floor multiplier must be positive");
  }
  TrialConfig cfg = config;
  cfg.verify_ric = true;
  validate_config(spec, cfg);

  struct Outcome {
    TrialRecord record;
    bool compliant = false;
    bool support_bad = false, error_bad = false, wrong_bad = false, true_bad = false;
  };
  std::vector<Outcome> outcomes(cfg.trials);
  const double eps = cfg.noise_epsilon;

  parallel_for(cfg.trials, options.threads, [&](std::size_t ti) {
    TrialInstance inst = draw_trial(spec, cfg, 0, ti);
    const double delta = *maybe_ric(inst.matrix, cfg, options);
    const bool below = delta < sharp_threshold(cfg.k, cfg.g, cfg.b);
    double floor = 0.0;
    if (below && eps > 0.0) {
      floor = sufficient_min_magnitude(delta, cfg.k, cfg.g, eps);
      // Rescale x so that min_T |x_i| = multiplier * floor; noise is unchanged.
      const double smallest = inst.signal.values().cwiseAbs().minCoeff();
      Vector values = inst.signal.values() * (cfg.floor_multiplier * floor / smallest);
      inst.signal = SparseSignal(inst.signal.dimension(), inst.signal.support(), values);
    }
    Outcome out;
    out.record = evaluate(inst, cfg, ti, delta);
    const double smallest = inst.signal.values().cwiseAbs().minCoeff();
    out.compliant = below && smallest > floor;
    const std::size_t remainder = cfg.k - cfg.g;
    const bool recovered = out.record.success && out.record.iterations == remainder;
    if (out.compliant) {
      const double bound = eps / std::sqrt(1.0 - delta);
      const double slack = 1e-12 * (1.0 + bound);
      const auto& d = out.record.diagnostics;
      out.support_bad = !recovered;
      out.error_bad = d.error_l2 > bound + slack;
      out.wrong_bad = d.max_wrong_prior > bound + slack;
      out.true_bad = !(d.min_true_prior > bound);
    } else {
      out.support_bad = !recovered;
    }
    outcomes[ti] = std::move(out);
  });

  NoisyBoundTable table;
  table.trials = cfg.trials;
  for (const auto& o : outcomes) {
    if (!o.compliant) {
      table.noncompliant_support_failures += o.support_bad;
      continue;
    }
    ++table.compliant;
    table.support_violations += o.support_bad;
    table.error_violations += o.error_bad;
    table.wrong_prior_violations += o.wrong_bad;
    table.true_prior_violations += o.true_bad;
    if (o.support_bad || o.error_bad || o.wrong_bad || o.true_bad) {
      table.violating.push_back(o.record);
    }
  }
  return table;
}

std::vector<PriorComparisonRow> prior_value_comparison(const EnsembleSpec& spec, std::size_t k,
                                                       const std::vector<std::size_t>& g_values,
                                                       std::size_t b, std::size_t trials,
                                                       const RunOptions& options) {
  std::vector<PriorComparisonRow> rows;
  if (g_values.empty()) return rows;
  for (std::size_t g : g_values) {
    TrialConfig probe;
    probe.k = k;
    probe.g = g;
    probe.b = b;
    validate_config(spec, probe);
  }
  TrialConfig base;
  base.k = k;

  // success[t][j]: g_values[j] on trial t; baseline[t]: T0 = ∅.
  std::vector<std::vector<char>> success(trials, std::vector<char>(g_values.size(), 0));
  std::vector<char> baseline(trials, 0);
  parallel_for(trials, options.threads, [&](std::size_t ti) {
    const TrialInstance inst = draw_trial(spec, base, 0, ti);
    const Vector y = inst.measurements();
    const RecoveryTrace plain = omp_prior(inst.matrix, y, PriorSupport{}, FixedIterations{k});
    baseline[ti] = success_check(plain, inst.signal, PriorSupport{});

    std::mt19937_64 rng(stream_seed(spec.seed ^ 0x5bd1e995ULL, 1, ti));
    const IndexSet& support = inst.signal.support();
    const IndexSet outside = set_difference(iota_set(spec.cols), support);
    for (std::size_t j = 0; j < g_values.size(); ++j) {
      const std::size_t g = g_values[j];
      const PriorSupport prior(set_union(sample_without_replacement(support, g, rng),
                                         sample_without_replacement(outside, b, rng)));
      const RecoveryTrace trace = omp_prior(inst.matrix, y, prior, FixedIterations{k - g});
      success[ti][j] = success_check(trace, inst.signal, prior);
    }
  });

  const double total = static_cast<double>(std::max<std::size_t>(trials, 1));
  const double base_rate =
      static_cast<double>(std::count(baseline.begin(), baseline.end(), 1)) / total;
  for (std::size_t j = 0; j < g_values.size(); ++j) {
    PriorComparisonRow row;
    row.g = g_values[j];
    row.b = b;
    row.trials = trials;
    std::size_t hits = 0;
    for (const auto& s : success) hits += static_cast<std::size_t>(s[j]);
    row.success_rate = static_cast<double>(hits) / total;
    row.baseline_success_rate = base_rate;
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.config.k << ',' << r.config.g << ',' << r.config.b << ','
        << format_double(r.config.noise_epsilon) << ',' << r.trials << ','
        << format_double(r.threshold_rate) << ',' << format_double(r.success_rate) << ','
        << format_double(r.exact_rate) << ',' << format_double(r.mean_err_l2) << '\n';
  }
}

void write_trial_csv(std::ostream& out, const SweepResult& result) {
  out << "config,trial,exact_delta,threshold_satisfied,magnitude_satisfied,success,"
         "exact_recovery,iterations,error_l2\n";
  for (std::size_t c = 0; c < result.records.size(); ++c) {
    for (const auto& r : result.records[c]) {
      out << c << ',' << r.trial_index << ','
          << (r.exact_delta ? format_double(*r.exact_delta) : std::string()) << ','
          << r.threshold_satisfied << ',' << r.magnitude_condition_satisfied << ','
          << r.success << ',' << r.exact_recovery << ',' << r.iterations << ','
          << format_double(r.error_l2) << '\n';
    }
  }
}

}  // namespace ompt0
