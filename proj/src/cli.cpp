#include "ompt0/cli.hpp"

#include "ompt0/constructions.hpp"
#include "ompt0/ric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ompt0::cli {
namespace {

// 12 significant digits: enough for reports, stable under last-bit noise.
std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string join(const IndexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

std::string join(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v(i));
  return out;
}

const char* verdict(bool ok) { return ok ? "ok" : "FAILED"; }

void print_trace(std::ostream& out, const RecoveryTrace& trace) {
  out << "t\tj_t\tresidual_norm\ttie\n";
  out << 0 << "\t-\t" << num(trace.residual_norms[0]) << "\t-\n";
  for (std::size_t t = 1; t < trace.residual_norms.size(); ++t) {
    out << t << '\t' << trace.selected[t - 1] << '\t' << num(trace.residual_norms[t]) << '\t'
        << (trace.tie[t - 1] ? "yes" : "no") << '\n';
  }
}

void print_estimate(std::ostream& out, const Vector& estimate) {
  out << "estimate (index value):\n";
  for (Index i = 0; i < estimate.size(); ++i) {
    if (estimate(i) != 0.0) out << "  " << i << '\t' << num(estimate(i)) << '\n';
  }
}

// Runs `body`, translating library errors into exit codes.
template <typename Body>
int guarded(std::ostream& err, const char* stage, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error [" << stage << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error [" << stage << "]: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidCounts:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::ConfigInfeasible:
    case ErrorKind::ThresholdViolated:
    case ErrorKind::EmptyDictionary:
    case ErrorKind::ZeroVector:
      return kMalformedInput;
    case ErrorKind::BudgetExceeded:
      return kBudgetExceeded;
    case ErrorKind::TheoremGateViolated:
      return kTheoremViolation;
    case ErrorKind::RankDeficient:
    case ErrorKind::EigenFailure:
    case ErrorKind::SelfCheckFailed:
      return kNumericalFailure;
  }
  return kNumericalFailure;
}

StoppingRule default_stopping_rule(const ProblemFile& problem) {
  if (problem.epsilon > 0.0) return ResidualThreshold{problem.epsilon};
  const IndexSet prior = normalized(problem.prior);
  std::size_t known = prior.size();
  if (problem.x) {
    known = PriorSupport(prior).true_count(SparseSignal::from_dense(*problem.x).support());
  }
  return FixedIterations{problem.k > known ? problem.k - known : 0};
}

int cmd_recover(const ProblemFile& problem, const RecoverOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, "recover", [&] {
    const PriorSupport prior(problem.prior);
    std::optional<SparseSignal> truth;
    if (problem.x) truth = SparseSignal::from_dense(*problem.x);
    if (options.tie == TieKind::Adversarial && !truth) {
      err << "error [recover]: --tie adversarial needs the true signal x in the problem file\n";
      return static_cast<int>(kMalformedInput);
    }
    const StoppingRule stop = options.stop.value_or(default_stopping_rule(problem));
    const TieBreakPolicy tie =
        truth ? make_tie_policy(options.tie, *truth, prior)
              : (options.tie == TieKind::Highest ? TieBreakPolicy{HighestIndex{}}
                                                 : TieBreakPolicy{LowestIndex{}});
    const RecoveryTrace trace = omp_prior(problem.matrix, problem.y, prior, stop, tie);
    print_trace(out, trace);
    out << "iterations: " << trace.iterations() << '\n';
    out << "selected: " << join(trace.selected) << '\n';
    print_estimate(out, trace.estimate);
    if (truth) {
      const auto d = support_estimate_diagnostics(trace, *truth, prior);
      out << "success: " << (success_check(trace, *truth, prior) ? "true" : "false") << '\n';
      out << "exact_recovery: " << (exact_recovery_check(trace, *truth, 1e-8) ? "true" : "false")
          << '\n';
      out << "error_l2: " << num(d.error_l2) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_ric(const Matrix& a, std::size_t order, const RicOptions& options, std::ostream& out,
            std::ostream& err) {
  return guarded(err, "ric", [&] {
    const RicReport r = exact_ric(a, order, options);
    out << "order: " << r.order << '\n';
    out << "delta: " << num(r.value) << '\n';
    out << "witness: " << join(r.witness) << '\n';
    out << "subsets_evaluated: " << r.subsets_evaluated << '\n';
    out << "rip_holds: " << (r.rip_holds() ? "true" : "false") << '\n';
    return static_cast<int>(kOk);
  });
}

namespace {

void write_outputs(const DemoOptions& options, const Matrix& a, const ProblemFile& problem) {
  if (options.write_matrix) write_matrix_file(*options.write_matrix, a);
  if (options.write_problem) {
    std::ofstream f(*options.write_problem);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write " + options.write_problem->string());
    write_problem(f, problem);
  }
}

ProblemFile as_problem(const Matrix& a, const Vector& y, const SparseSignal& x,
                       const PriorSupport& prior, double epsilon) {
  ProblemFile p;
  p.matrix = a;
  p.y = y;
  p.x = x.dense();
  p.prior = prior.indices();
  p.k = x.sparsity();
  p.epsilon = epsilon;
  return p;
}

}  // namespace

int cmd_demo_sharp(std::size_t k, std::size_t g, std::size_t b, const DemoOptions& options,
                   std::ostream& out, std::ostream& err) {
  if (k < 1 || g >= k) {
    err << "usage: ompt0 demo sharp K G B   (requires K >= 1 and 0 <= G < K)\n";
    return kMalformedInput;
  }
  return guarded(err, "demo sharp", [&] {
    const SharpInstance inst = build_sharp(k, g, b);
    const Vector y = inst.measurements();
    bool all_ok = true;

    out << "sharp instance k=" << k << " g=" << g << " b=" << b << " (size " << k + b + 1
        << ", 0-based T = 0.." << k - 1 << ", T0 = " << join(inst.prior.indices())
        << ", outside index " << inst.outside_index() << ")\n";
    const Vector measured = gram_spectrum(inst.matrix);
    const bool spectrum_ok =
        (measured - inst.advertised_spectrum).lpNorm<Eigen::Infinity>() <= 1e-10;
    out << "spectrum advertised: " << join(inst.advertised_spectrum) << '\n';
    out << "spectrum measured:   " << join(measured) << "  [" << verdict(spectrum_ok) << "]\n";
    const RicReport ric = exact_ric(inst.matrix, k + b + 1);
    const bool delta_ok = std::abs(ric.value - inst.advertised_delta) <= 1e-10;
    out << "delta advertised: " << num(inst.advertised_delta) << "  measured: " << num(ric.value)
        << "  [" << verdict(delta_ok) << "]\n";
    all_ok = spectrum_ok && delta_ok;

    const Vector r0 =
        projection_residual(select_columns(inst.matrix, inst.prior.indices()), y);
    const double expected = static_cast<double>(k - g) / static_cast<double>(k - g + 1);
    out << "first-iteration correlations |<A e_i, r0>| (expected " << num(expected) << "):\n";
    IndexSet rows = set_difference(inst.signal.support(), inst.prior.indices());
    rows.push_back(inst.outside_index());
    for (Index i : rows) {
      const double c = std::abs(inst.matrix.col(i).dot(r0));
      const bool ok = std::abs(c - expected) <= 1e-10;
      all_ok = all_ok && ok;
      out << "  " << i << '\t' << (i == inst.outside_index() ? "outside" : "T\\T0") << '\t'
          << num(c) << "  [" << verdict(ok) << "]\n";
    }

    const TieBreakPolicy adversarial = AdversarialOutside{inst.signal.support(), inst.prior.indices()};
    const RecoveryTrace bad = omp_prior(inst.matrix, y, inst.prior, FixedIterations{k - g}, adversarial);
    const bool failed = !success_check(bad, inst.signal, inst.prior);
    out << "adversarial tie-break trace:\n";
    print_trace(out, bad);
    out << "first selection: " << bad.selected.front() << "  success: "
        << (failed ? "false" : "true") << "  [" << verdict(failed) << "]\n";
    all_ok = all_ok && failed;

    const RecoveryTrace low = omp_prior(inst.matrix, y, inst.prior, FixedIterations{k - g});
    out << "lowest-index tie-break: selected " << join(low.selected) << "  success: "
        << (success_check(low, inst.signal, inst.prior) ? "true" : "false") << '\n';

    write_outputs(options, inst.matrix, as_problem(inst.matrix, y, inst.signal, inst.prior, 0.0));
    out << (all_ok ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    return static_cast<int>(all_ok ? kOk : kNumericalFailure);
  });
}

int cmd_demo_necessary(std::size_t k, std::size_t g, std::size_t b, double delta, double epsilon,
                       const DemoOptions& options, std::ostream& out, std::ostream& err) {
  if (k < 1 || g >= k) {
    err << "usage: ompt0 demo necessary K G B DELTA EPSILON   (requires 0 <= G < K, "
           "0 <= DELTA < 1/sqrt(K-G+1), EPSILON > 0)\n";
    return kMalformedInput;
  }
  return guarded(err, "demo necessary", [&] {
    const NecessaryInstance inst = build_necessary(k, g, b, delta, epsilon);
    const Vector y = inst.measurements();
    const auto d = static_cast<double>(k - g);
    const double root = std::sqrt(d + 1.0);
    bool all_ok = true;

    out << "necessary-condition instance k=" << k << " g=" << g << " b=" << b
        << " delta=" << num(delta) << " epsilon=" << num(epsilon) << '\n';
    out << "theta: " << num(inst.theta) << "\neta: " << num(inst.eta) << "\nmu: " << num(inst.mu)
        << '\n';
    const RicReport ric = exact_ric(inst.matrix, k + b + 1);
    const bool delta_ok = std::abs(ric.value - delta) <= 1e-9;
    out << "delta measured: " << num(ric.value) << "  [" << verdict(delta_ok) << "]\n";
    const bool noise_ok = inst.noise.norm() <= epsilon * (1.0 + 1e-12);
    out << "||v||_2: " << num(inst.noise.norm()) << " <= " << num(epsilon) << "  ["
        << verdict(noise_ok) << "]\n";
    const double lhs = 2.0 * inst.eta / (inst.eta * inst.eta + 1.0) * std::sqrt(d);
    const bool identity_ok = std::abs(lhs - d / root) <= 1e-12;
    out << "2 eta sqrt(k-g)/(eta^2+1) = " << num(lhs) << ", (k-g)/sqrt(k-g+1) = " << num(d / root)
        << "  [" << verdict(identity_ok) << "]\n";
    all_ok = delta_ok && noise_ok && identity_ok;

    const Vector r0 = projection_residual(select_columns(inst.matrix, inst.prior.indices()), y);
    const double inside_expected = (1.0 - delta / root) * inst.theta;
    const double outside_expected = -(d / root) * delta * inst.theta - std::sqrt(1.0 - delta) * epsilon;
    out << "first-iteration correlations <A e_i, r0>:\n";
    double inside_max = 0.0;
    for (Index i : set_difference(inst.signal.support(), inst.prior.indices())) {
      const double c = inst.matrix.col(i).dot(r0);
      inside_max = std::max(inside_max, std::abs(c));
      const bool ok = std::abs(c - inside_expected) <= 1e-10;
      all_ok = all_ok && ok;
      out << "  " << i << "\tT\\T0\t" << num(c) << "  (closed form " << num(inside_expected)
          << ")  [" << verdict(ok) << "]\n";
    }
    const double c_out = inst.matrix.col(inst.outside_index()).dot(r0);
    const bool out_ok = std::abs(c_out - outside_expected) <= 1e-10;
    out << "  " << inst.outside_index() << "\toutside\t" << num(c_out) << "  (closed form "
        << num(outside_expected) << ")  [" << verdict(out_ok) << "]\n";
    const bool tie_ok = std::abs(inside_max - std::abs(c_out)) <= 1e-9 * inst.theta;
    out << "maxima: T\\T0 " << num(inside_max) << ", outside " << num(std::abs(c_out)) << "  ["
        << (tie_ok ? "tie" : "NO TIE") << "]\n";
    all_ok = all_ok && out_ok && tie_ok;

    const TieBreakPolicy adversarial = AdversarialOutside{inst.signal.support(), inst.prior.indices()};
    const RecoveryTrace bad = omp_prior(inst.matrix, y, inst.prior, FixedIterations{k - g}, adversarial);
    const bool wrong_first = bad.selected.front() == inst.outside_index();
    out << "adversarial tie-break trace:\n";
    print_trace(out, bad);
    out << "first selection: " << bad.selected.front() << "  [" << verdict(wrong_first) << "]\n";
    all_ok = all_ok && wrong_first;

    write_outputs(options, inst.matrix,
                  as_problem(inst.matrix, y, inst.signal, inst.prior, epsilon));
    out << (all_ok ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    return static_cast<int>(all_ok ? kOk : kNumericalFailure);
  });
}

int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& output,
              const std::optional<std::filesystem::path>& details, const RunOptions& options,
              std::ostream& out, std::ostream& err) {
  return guarded(err, "sweep", [&] {
    const SweepConfig cfg = read_sweep_config_file(config);
    RunOptions run = options;
    run.keep_records = details.has_value();
    const SweepResult result = run_sweep(cfg.spec, cfg.trials, run);
    std::ofstream f(output);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write " + output.string());
    write_sweep_csv(f, result.rows);
    if (details) {
      std::ofstream d(*details);
      if (!d) throw Error(ErrorKind::ParseError, "cannot write " + details->string());
      write_trial_csv(d, result);
    }
    out << "wrote " << result.rows.size() << " rows to " << output.string() << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace ompt0::cli
