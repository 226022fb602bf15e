#include "aicn/linalg.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace aicn {

CholeskyFactor::CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols()) {
    throw DimensionMismatch("Cholesky factor must be square");
  }
}

Vector CholeskyFactor::solve(const Vector& b) const {
  if (b.size() != lower_.rows()) {
    throw DimensionMismatch("solve: right-hand side has wrong size");
  }
  Vector v = lower_.triangularView<Eigen::Lower>().solve(b);
  lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(v);
  if (!v.allFinite()) throw NumericalError("solve produced non-finite values");
  return v;
}

Vector CholeskyFactor::forward_solve(const Vector& b) const {
  if (b.size() != lower_.rows()) {
    throw DimensionMismatch("forward_solve: right-hand side has wrong size");
  }
  Vector w = lower_.triangularView<Eigen::Lower>().solve(b);
  if (!w.allFinite()) throw NumericalError("forward_solve produced non-finite values");
  return w;
}

Matrix CholeskyFactor::forward_solve(const Matrix& b) const {
  if (b.rows() != lower_.rows()) {
    throw DimensionMismatch("forward_solve: right-hand side has wrong row count");
  }
  Matrix w = lower_.triangularView<Eigen::Lower>().solve(b);
  if (!w.allFinite()) throw NumericalError("forward_solve produced non-finite values");
  return w;
}

Matrix CholeskyFactor::reconstruct() const {
  return lower_ * lower_.transpose();
}

CholeskyFactor cholesky(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionMismatch("cholesky: matrix must be square");
  if (!h.allFinite()) throw NumericalError("cholesky: matrix has non-finite entries");
  const auto n = h.rows();
  const double max_diag = h.diagonal().maxCoeff();
  const double pivot_floor = 1e-14 * max_diag;
  if (!(max_diag > 0.0)) {
    throw NotPositiveDefinite("cholesky: maximum diagonal entry is not positive");
  }

  // Left-looking factorization reading the lower triangle of h. The explicit
  // loop keeps the pivot acceptance rule (pivot >= 1e-14 * max diagonal) in
  // one place instead of relying on a library-specific failure heuristic.
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = h(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot >= pivot_floor)) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) +
                                " below positive definiteness threshold");
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (h(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

double hessian_norm(const Vector& v, const Matrix& h) {
  if (v.size() != h.rows() || h.rows() != h.cols()) {
    throw DimensionMismatch("hessian_norm: incompatible sizes");
  }
  const double q = v.dot(h * v);
  if (!std::isfinite(q)) throw NumericalError("hessian_norm: non-finite quadratic form");
  // <Hv, v> can round to a tiny negative number near the null space.
  return std::sqrt(std::max(q, 0.0));
}

double hessian_norm(const Vector& v, const CholeskyFactor& factor) {
  if (v.size() != factor.dim()) throw DimensionMismatch("hessian_norm: incompatible sizes");
  return (factor.lower().transpose() * v).norm();
}

double dual_norm(const Vector& g, const CholeskyFactor& factor) {
  return factor.forward_solve(g).norm();
}

double dual_norm(const Vector& g, const Matrix& h) {
  return dual_norm(g, cholesky(h));
}

double metric_operator_norm(const Matrix& m, const CholeskyFactor& factor) {
  if (m.rows() != m.cols() || m.rows() != factor.dim()) {
    throw DimensionMismatch("metric_operator_norm: incompatible sizes");
  }
  // L^{-1} M L^{-T} is orthogonally similar to H^{-1/2} M H^{-1/2}.
  Matrix c = factor.forward_solve(Matrix(m));
  c = factor.forward_solve(Matrix(c.transpose()));
  c = 0.5 * (c + c.transpose());  // kill asymmetric roundoff before eigensolve
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("metric_operator_norm: eigensolver failed");
  }
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return std::max(std::abs(lo), std::abs(hi));
}

double metric_operator_norm(const Matrix& m, const Matrix& h) {
  return metric_operator_norm(m, cholesky(h));
}

}  // namespace aicn
