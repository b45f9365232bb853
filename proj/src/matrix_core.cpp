#include "ompt0/matrix_core.hpp"

#include "ompt0/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ompt0 {

Matrix select_columns(const Matrix& a, std::span<const Index> cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    const Index c = cols[static_cast<std::size_t>(j)];
    if (c < 0 || c >= a.cols()) {
      throw Error(ErrorKind::PreconditionViolated,
                  "column index " + std::to_string(c) + " out of range [0, " +
                      std::to_string(a.cols()) + ")");
    }
    out.col(j) = a.col(c);
  }
  return out;
}

GramExtremes symmetric_extremes(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenFailure, "symmetric eigensolve did not converge");
  }
  const Vector& ev = solver.eigenvalues();
  return {std::max(ev(0), 0.0), std::max(ev(ev.size() - 1), 0.0)};
}

GramExtremes gram_extremes(const Matrix& sub) {
  if (sub.rows() == 0 || sub.cols() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "gram_extremes of an empty matrix");
  }
  return symmetric_extremes(sub.transpose() * sub);
}

Vector gram_spectrum(const Matrix& sub) {
  if (sub.rows() == 0 || sub.cols() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "gram_spectrum of an empty matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sub.transpose() * sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenFailure, "symmetric eigensolve did not converge");
  }
  return solver.eigenvalues();
}

Vector least_squares(const Matrix& basis, const Vector& target) {
  if (target.size() != basis.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "least_squares: target length " + std::to_string(target.size()) +
                    " != basis rows " + std::to_string(basis.rows()));
  }
  if (basis.cols() == 0) return Vector(0);
  if (basis.cols() > basis.rows()) {
    throw Error(ErrorKind::RankDeficient, "least_squares: more columns (" +
                                              std::to_string(basis.cols()) + ") than rows (" +
                                              std::to_string(basis.rows()) + ")");
  }
  const GramExtremes ext = gram_extremes(basis);
  if (ext.lambda_min < kRankTolerance * ext.lambda_max || ext.lambda_max == 0.0) {
    throw Error(ErrorKind::RankDeficient, "least_squares: Gram matrix is numerically singular");
  }
  Eigen::HouseholderQR<Matrix> qr(basis);
  return qr.solve(target);
}

Vector projection_residual(const Matrix& basis, const Vector& target) {
  if (basis.cols() == 0) {
    if (basis.rows() != target.size() && basis.rows() != 0) {
      throw Error(ErrorKind::DimensionMismatch, "projection_residual: length mismatch");
    }
    return target;
  }
  return target - basis * least_squares(basis, target);
}

void require_finite_nonempty(const Matrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": matrix must be non-empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::PreconditionViolated, std::string(what) + ": non-finite entry");
  }
}

}  // namespace ompt0
