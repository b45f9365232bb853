#include "ompt0/signal.hpp"

#include "ompt0/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

namespace ompt0 {

IndexSet normalized(IndexSet indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const IndexSet& sorted, Index i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

SparseSignal::SparseSignal(Index dimension, IndexSet support, Vector values)
    : dimension_(dimension), support_(std::move(support)), values_(std::move(values)) {
  if (dimension_ < 0) throw Error(ErrorKind::PreconditionViolated, "negative signal dimension");
  if (static_cast<Index>(support_.size()) != values_.size()) {
    throw Error(ErrorKind::PreconditionViolated, "support size != number of values");
  }
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const Index i = support_[j];
    if (i < 0 || i >= dimension_) {
      throw Error(ErrorKind::PreconditionViolated,
                  "support index " + std::to_string(i) + " out of range");
    }
    if (j > 0 && support_[j - 1] >= i) {
      throw Error(ErrorKind::PreconditionViolated, "support must be strictly increasing");
    }
    const double v = values_(static_cast<Index>(j));
    if (v == 0.0 || !std::isfinite(v)) {
      throw Error(ErrorKind::PreconditionViolated,
                  "signal value at index " + std::to_string(i) + " must be finite and nonzero");
    }
  }
}

SparseSignal SparseSignal::from_dense(const Vector& dense) {
  IndexSet support;
  for (Index i = 0; i < dense.size(); ++i) {
    if (dense(i) != 0.0) support.push_back(i);
  }
  Vector values(static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) values(static_cast<Index>(j)) = dense(support[j]);
  return SparseSignal(dense.size(), std::move(support), std::move(values));
}

Vector SparseSignal::dense() const {
  Vector out = Vector::Zero(dimension_);
  for (std::size_t j = 0; j < support_.size(); ++j) out(support_[j]) = values_(static_cast<Index>(j));
  return out;
}

PriorSupport::PriorSupport(IndexSet indices) : indices_(normalized(std::move(indices))) {
  if (!indices_.empty() && indices_.front() < 0) {
    throw Error(ErrorKind::PreconditionViolated, "prior support index must be non-negative");
  }
}

std::size_t PriorSupport::true_count(const IndexSet& true_support) const {
  return set_intersection(indices_, true_support).size();
}

std::size_t PriorSupport::wrong_count(const IndexSet& true_support) const {
  return set_difference(indices_, true_support).size();
}

}  // namespace ompt0
