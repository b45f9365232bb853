#pragma once

// Adversarial instances on which the recovery thresholds are attained.
//
// Index convention: T = {0, ..., k-1}, T0 = {k-g, ..., k+b-1}, and the single
// index outside T ∪ T0 is k+b, the last column. Both matrices are square of
// size k+b+1.

#include "ompt0/matrix_core.hpp"
#include "ompt0/signal.hpp"

#include <cstddef>

namespace ompt0 {

/// Instance with δ_{k+b+1} = 1/sqrt(k-g+1) on which the first iteration
/// has an exact tie between T \ T0 and the outside index.
struct SharpInstance {
  std::size_t k = 0, g = 0, b = 0;
  Matrix matrix;
  SparseSignal signal;  // all ones on T
  PriorSupport prior;
  double advertised_delta = 0.0;
  /// Eigenvalues of A'A in ascending order, from the closed form.
  Vector advertised_spectrum;

  Vector measurements() const { return matrix * signal.dense(); }
  Index outside_index() const { return static_cast<Index>(k + b); }
};

/// Instance y = Ax + v whose minimum remainder magnitude equals the
/// necessary-condition threshold θ, producing an exact first-iteration tie.
struct NecessaryInstance {
  std::size_t k = 0, g = 0, b = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double theta = 0.0;
  double eta = 0.0;
  /// Common value of <A e_i, A_{T\T0} x_{T\T0}> for i in T \ T0.
  double mu = 0.0;
  Matrix rotation;  // U, orthogonal
  Vector scaling;   // diagonal of D
  Matrix matrix;    // A = D U
  SparseSignal signal;
  Vector noise;
  PriorSupport prior;

  Vector measurements() const { return matrix * signal.dense() + noise; }
  Index outside_index() const { return static_cast<Index>(k + b); }
};

/// Closed-form Gram eigenvalues of the sharp matrix, ascending.
Vector sharp_spectrum(std::size_t k, std::size_t g, std::size_t b);

/// Throws InvalidCounts, or SelfCheckFailed if the assembled spectrum or
/// exact RIC disagrees with the closed form.
SharpInstance build_sharp(std::size_t k, std::size_t g, std::size_t b);

/// Throws InvalidCounts, ThresholdViolated (δ >= 1/sqrt(k-g+1)),
/// PreconditionViolated (ε <= 0), or SelfCheckFailed.
NecessaryInstance build_necessary(std::size_t k, std::size_t g, std::size_t b, double delta,
                                  double epsilon);

/// (d-1) x d matrix whose rows, together with v/||v||, form an orthonormal
/// basis of R^d. Deterministic: Gram-Schmidt over the coordinate vectors,
/// skipping the one most aligned with v. Throws ZeroVector.
Matrix orthonormal_completion(const Vector& v);

}  // namespace ompt0
