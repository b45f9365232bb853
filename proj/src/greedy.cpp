#include "ompt0/greedy.hpp"

#include "ompt0/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ompt0 {
namespace {

struct Selection {
  Index index = -1;
  bool tie = false;
};

Selection select_index(const Vector& correlations, const std::vector<bool>& excluded,
                       const TieBreakPolicy& policy) {
  double best = -1.0;
  for (Index i = 0; i < correlations.size(); ++i) {
    if (!excluded[static_cast<std::size_t>(i)]) best = std::max(best, correlations(i));
  }
  IndexSet tied;
  for (Index i = 0; i < correlations.size(); ++i) {
    if (!excluded[static_cast<std::size_t>(i)] && best - correlations(i) <= kTieTolerance) {
      tied.push_back(i);
    }
  }
  Selection out;
  out.tie = tied.size() > 1;
  if (std::holds_alternative<HighestIndex>(policy)) {
    out.index = tied.back();
  } else if (const auto* adv = std::get_if<AdversarialOutside>(&policy)) {
    const IndexSet joint = set_union(normalized(adv->true_support), normalized(adv->prior));
    const auto it = std::find_if(tied.begin(), tied.end(),
                                 [&](Index i) { return !contains(joint, i); });
    out.index = it != tied.end() ? *it : tied.front();
  } else {
    out.index = tied.front();
  }
  return out;
}

}  // namespace

RecoveryTrace omp_prior(const Matrix& a, const Vector& y, const PriorSupport& prior,
                        const StoppingRule& stop, const TieBreakPolicy& tie) {
  if (a.cols() == 0) throw Error(ErrorKind::EmptyDictionary, "omp_prior: A has no columns");
  if (y.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "omp_prior: y length " + std::to_string(y.size()) + " != A rows " +
                    std::to_string(a.rows()));
  }
  const IndexSet& t0 = prior.indices();
  if (!t0.empty() && t0.back() >= a.cols()) {
    throw Error(ErrorKind::PreconditionViolated,
                "omp_prior: prior index " + std::to_string(t0.back()) + " >= number of columns");
  }

  const Index n = a.cols();
  const auto prior_size = static_cast<Index>(t0.size());
  Index max_iterations = n - prior_size;
  bool use_threshold = false;
  double epsilon = 0.0;
  if (const auto* fixed = std::get_if<FixedIterations>(&stop)) {
    max_iterations = std::min<Index>(max_iterations, static_cast<Index>(fixed->count));
  } else {
    epsilon = std::get<ResidualThreshold>(stop).epsilon;
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw Error(ErrorKind::PreconditionViolated, "omp_prior: epsilon must be finite and >= 0");
    }
    use_threshold = true;
    max_iterations = std::max<Index>(0, std::min(a.rows(), n) - prior_size);
  }

  RecoveryTrace trace;
  trace.final_support = t0;
  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  for (Index i : t0) in_support[static_cast<std::size_t>(i)] = true;

  Matrix basis = select_columns(a, t0);
  Vector coeffs = least_squares(basis, y);
  Vector residual = basis.cols() == 0 ? Vector(y) : Vector(y - basis * coeffs);
  trace.residual_norms.push_back(residual.norm());

  for (Index t = 0; t < max_iterations; ++t) {
    if (use_threshold && trace.residual_norms.back() <= epsilon) break;

    const Vector correlations = (a.transpose() * residual).cwiseAbs();
    const Selection pick = select_index(correlations, in_support, tie);
    trace.selected.push_back(pick.index);
    trace.tie.push_back(pick.tie);
    trace.final_support.push_back(pick.index);
    in_support[static_cast<std::size_t>(pick.index)] = true;

    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = a.col(pick.index);
    coeffs = least_squares(basis, y);
    residual = y - basis * coeffs;
    trace.residual_norms.push_back(residual.norm());
  }

  trace.estimate = Vector::Zero(n);
  for (std::size_t j = 0; j < trace.final_support.size(); ++j) {
    trace.estimate(trace.final_support[j]) = coeffs(static_cast<Index>(j));
  }
  return trace;
}

namespace {

void require_same_dimension(const RecoveryTrace& trace, const SparseSignal& truth) {
  if (trace.estimate.size() != truth.dimension()) {
    throw Error(ErrorKind::DimensionMismatch,
                "trace dimension " + std::to_string(trace.estimate.size()) +
                    " != signal dimension " + std::to_string(truth.dimension()));
  }
}

}  // namespace

bool success_check(const RecoveryTrace& trace, const SparseSignal& truth,
                   const PriorSupport& prior) {
  require_same_dimension(trace, truth);
  const IndexSet remainder = set_difference(truth.support(), prior.indices());
  if (trace.selected.size() < remainder.size()) return false;
  return std::all_of(trace.selected.begin(),
                     trace.selected.begin() + static_cast<std::ptrdiff_t>(remainder.size()),
                     [&](Index j) { return contains(remainder, j); });
}

bool exact_recovery_check(const RecoveryTrace& trace, const SparseSignal& truth, double tol) {
  require_same_dimension(trace, truth);
  if (!(tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tolerance must be positive");
  return (trace.estimate - truth.dense()).lpNorm<Eigen::Infinity>() <= tol;
}

EstimateDiagnostics support_estimate_diagnostics(const RecoveryTrace& trace,
                                                 const SparseSignal& truth,
                                                 const PriorSupport& prior) {
  require_same_dimension(trace, truth);
  EstimateDiagnostics out;
  for (Index i : set_intersection(truth.support(), prior.indices())) {
    out.min_true_prior = std::min(out.min_true_prior, std::abs(trace.estimate(i)));
  }
  for (Index i : set_difference(prior.indices(), truth.support())) {
    out.max_wrong_prior = std::max(out.max_wrong_prior, std::abs(trace.estimate(i)));
  }
  out.error_l2 = (truth.dense() - trace.estimate).norm();
  return out;
}

}  // namespace ompt0
