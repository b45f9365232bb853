#include "ompt0/constructions.hpp"

#include "ompt0/errors.hpp"
#include "ompt0/ric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ompt0 {
namespace {

constexpr double kSpectrumTolerance = 1e-10;
constexpr double kNecessaryRicTolerance = 1e-9;

void require_counts(std::size_t k, std::size_t g) {
  if (k < 1 || g >= k) {
    throw Error(ErrorKind::InvalidCounts, "need k >= 1 and 0 <= g < k, got k = " +
                                              std::to_string(k) + ", g = " + std::to_string(g));
  }
}

IndexSet range(Index first, Index last) {
  IndexSet out;
  for (Index i = first; i < last; ++i) out.push_back(i);
  return out;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

void self_check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::SelfCheckFailed, what);
}

}  // namespace

Vector sharp_spectrum(std::size_t k, std::size_t g, std::size_t b) {
  require_counts(k, g);
  const auto d = static_cast<double>(k - g);
  const double root = std::sqrt(d + 1.0);
  Vector out(static_cast<Index>(k + b + 1));
  Index pos = 0;
  for (std::size_t i = 0; i + 1 < k - g; ++i) out(pos++) = d / (d + 1.0);
  for (std::size_t i = 0; i < g + b; ++i) out(pos++) = 1.0;
  out(pos++) = 1.0 - 1.0 / root;
  out(pos++) = 1.0 + 1.0 / root;
  std::sort(out.begin(), out.end());
  return out;
}

SharpInstance build_sharp(std::size_t k, std::size_t g, std::size_t b) {
  require_counts(k, g);
  const Index size = static_cast<Index>(k + b + 1);
  const Index d = static_cast<Index>(k - g);
  const auto dd = static_cast<double>(d);

  SharpInstance inst;
  inst.k = k;
  inst.g = g;
  inst.b = b;
  inst.matrix = Matrix::Zero(size, size);
  for (Index i = 0; i < d; ++i) {
    inst.matrix(i, i) = std::sqrt(dd / (dd + 1.0));
    inst.matrix(i, size - 1) = 1.0 / std::sqrt((dd + 1.0) * dd);
  }
  for (Index i = d; i < size; ++i) inst.matrix(i, i) = 1.0;

  inst.signal = SparseSignal(size, range(0, static_cast<Index>(k)),
                             Vector::Ones(static_cast<Index>(k)));
  inst.prior = PriorSupport(range(d, static_cast<Index>(k + b)));
  inst.advertised_delta = 1.0 / std::sqrt(dd + 1.0);
  inst.advertised_spectrum = sharp_spectrum(k, g, b);

  const Vector measured = gram_spectrum(inst.matrix);
  self_check((measured - inst.advertised_spectrum).lpNorm<Eigen::Infinity>() <= kSpectrumTolerance,
             "build_sharp: Gram spectrum differs from the closed form");
  const RicReport ric = exact_ric(inst.matrix, static_cast<std::size_t>(size));
  self_check(std::abs(ric.value - inst.advertised_delta) <= kSpectrumTolerance,
             "build_sharp: exact RIC differs from 1/sqrt(k-g+1)");
  return inst;
}

Matrix orthonormal_completion(const Vector& v) {
  const Index d = v.size();
  const double norm = v.norm();
  if (d == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::ZeroVector, "orthonormal_completion: vector must be nonzero and finite");
  }
  Matrix basis(d, d);
  basis.col(0) = v / norm;
  Index skip = 0;
  basis.col(0).cwiseAbs().maxCoeff(&skip);

  Index filled = 1;
  for (Index j = 0; j < d; ++j) {
    if (j == skip) continue;
    Vector w = Vector::Unit(d, j);
    // Two passes of modified Gram-Schmidt keep the rows orthogonal to ~eps.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index c = 0; c < filled; ++c) w -= basis.col(c).dot(w) * basis.col(c);
    }
    basis.col(filled++) = w / w.norm();
  }
  return basis.rightCols(d - 1).transpose();
}

NecessaryInstance build_necessary(std::size_t k, std::size_t g, std::size_t b, double delta,
                                  double epsilon) {
  require_counts(k, g);
  const double threshold = sharp_threshold(k, g, b);
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::PreconditionViolated, "build_necessary: delta must be finite and >= 0");
  }
  if (delta >= threshold) {
    throw Error(ErrorKind::ThresholdViolated,
                "build_necessary: delta = " + std::to_string(delta) +
                    " must be below 1/sqrt(k-g+1) = " + std::to_string(threshold));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::PreconditionViolated, "build_necessary: epsilon must be positive");
  }

  const Index size = static_cast<Index>(k + b + 1);
  const Index d = static_cast<Index>(k - g);
  const auto dd = static_cast<double>(d);
  const Index last = size - 1;

  NecessaryInstance inst;
  inst.k = k;
  inst.g = g;
  inst.b = b;
  inst.delta = delta;
  inst.epsilon = epsilon;
  inst.theta = necessary_min_magnitude(delta, k, g, epsilon);
  inst.eta = (std::sqrt(dd + 1.0) - 1.0) / std::sqrt(dd);
  const double eta2 = inst.eta * inst.eta;
  const double mix = std::sqrt(eta2 + 1.0);
  inst.mu = ((1.0 - delta) + (1.0 + delta) * eta2) / (eta2 + 1.0) * inst.theta;

  // Rows of U: the completion ξ of 1_d, the mixed row, identity, the last row.
  Matrix& u = inst.rotation;
  u = Matrix::Zero(size, size);
  if (d > 1) u.topLeftCorner(d - 1, d) = orthonormal_completion(Vector::Ones(d));
  const double spread = 1.0 / std::sqrt(dd * (eta2 + 1.0));
  u.block(d - 1, 0, 1, d).setConstant(spread);
  u(d - 1, last) = inst.eta / mix;
  for (Index i = d; i < last; ++i) u(i, i) = 1.0;
  u.block(last, 0, 1, d).setConstant(inst.eta * spread);
  u(last, last) = -1.0 / mix;

  inst.scaling = Vector::Constant(size, std::sqrt(1.0 + delta));
  inst.scaling(d - 1) = std::sqrt(1.0 - delta);
  inst.matrix = inst.scaling.asDiagonal() * u;

  Vector x = Vector::Zero(size);
  x.head(d).setConstant(inst.theta);
  x.segment(d, static_cast<Index>(g)).setOnes();
  inst.signal = SparseSignal::from_dense(x);
  inst.prior = PriorSupport(range(d, static_cast<Index>(k + b)));

  // v = D^{-1} U (0, ..., 0, -sqrt(1-δ) ε)'
  const Vector tail = Vector::Unit(size, last) * (-std::sqrt(1.0 - delta) * epsilon);
  inst.noise = inst.scaling.cwiseInverse().asDiagonal() * (u * tail);

  self_check((u.transpose() * u - Matrix::Identity(size, size)).lpNorm<Eigen::Infinity>() <= 1e-10,
             "build_necessary: U is not orthogonal");
  const RicReport ric = exact_ric(inst.matrix, static_cast<std::size_t>(size));
  self_check(std::abs(ric.value - delta) <= kNecessaryRicTolerance,
             "build_necessary: exact RIC " + std::to_string(ric.value) + " != delta");
  self_check(inst.noise.norm() <= epsilon * (1.0 + 1e-12), "build_necessary: ||v|| > epsilon");
  const Matrix a_prior = select_columns(inst.matrix, inst.prior.indices());
  const Vector remainder_part = inst.matrix.leftCols(d) * x.head(d);
  self_check(inf_norm(a_prior.transpose() * remainder_part) <= 1e-10,
             "build_necessary: A_T0' A_{T\\T0} x != 0");
  self_check(inf_norm(a_prior.transpose() * inst.noise) <= 1e-10,
             "build_necessary: A_T0' v != 0");
  return inst;
}

}  // namespace ompt0
