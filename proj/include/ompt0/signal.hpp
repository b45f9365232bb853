#pragma once

// Sparse signals and prior support sets. All indices are 0-based.

#include "ompt0/matrix_core.hpp"

#include <cstddef>

namespace ompt0 {

/// Sorted, duplicate-free copy of `indices`.
IndexSet normalized(IndexSet indices);

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool contains(const IndexSet& sorted, Index i);

/// A signal stored as its support plus one nonzero value per index.
class SparseSignal {
 public:
  SparseSignal() = default;
  /// Throws PreconditionViolated if support is unsorted, out of range, or a
  /// value is zero / non-finite.
  SparseSignal(Index dimension, IndexSet support, Vector values);

  /// Support = nonzero entries of `dense`.
  static SparseSignal from_dense(const Vector& dense);

  Index dimension() const noexcept { return dimension_; }
  const IndexSet& support() const noexcept { return support_; }
  const Vector& values() const noexcept { return values_; }
  std::size_t sparsity() const noexcept { return support_.size(); }

  Vector dense() const;

 private:
  Index dimension_ = 0;
  IndexSet support_;
  Vector values_;
};

/// Index set T0 believed to hold part of the support.
class PriorSupport {
 public:
  PriorSupport() = default;
  explicit PriorSupport(IndexSet indices);

  const IndexSet& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  /// |T ∩ T0|
  std::size_t true_count(const IndexSet& true_support) const;
  /// |T0 \ T|
  std::size_t wrong_count(const IndexSet& true_support) const;

 private:
  IndexSet indices_;
};

}  // namespace ompt0
