#pragma once

// Dense linear-algebra primitives for desk-scale problems.

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace ompt0 {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexSet = std::vector<Index>;

/// Smallest Gram eigenvalue below this fraction of the largest is treated
/// as rank loss.
inline constexpr double kRankTolerance = 1e-12;

struct GramExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Columns of `a` listed in `cols`, in that order.
Matrix select_columns(const Matrix& a, std::span<const Index> cols);

/// Unique minimizer of ||target - basis * u||_2. Throws RankDeficient when
/// the basis is numerically rank deficient. An empty basis yields an empty
/// coefficient vector.
Vector least_squares(const Matrix& basis, const Vector& target);

/// target - P_basis(target); returns target unchanged for an empty basis.
Vector projection_residual(const Matrix& basis, const Vector& target);

/// Extreme eigenvalues of sub' * sub, clamped at zero from below.
GramExtremes gram_extremes(const Matrix& sub);

/// Extreme eigenvalues of a symmetric positive semidefinite matrix.
GramExtremes symmetric_extremes(const Matrix& gram);

/// All eigenvalues of sub' * sub in ascending order.
Vector gram_spectrum(const Matrix& sub);

/// Throws DimensionMismatch / PreconditionViolated if the matrix is empty or
/// holds a non-finite entry.
void require_finite_nonempty(const Matrix& a, const char* what);

}  // namespace ompt0
