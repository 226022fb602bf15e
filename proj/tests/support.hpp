#pragma once

// Helpers shared across the unit test binaries. Oracles here stay independent
// of the library code paths they check: explicit inverses, eigendecompositions
// and grid searches instead of Cholesky-based shortcuts.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aicn/linalg.hpp"
#include "aicn/objective.hpp"
#include "aicn/rng.hpp"

namespace testsupport {

using aicn::Matrix;
using aicn::Vector;

// Random orthogonal matrix from the QR factorization of a Gaussian matrix,
// with the sign fix that makes the distribution Haar.
inline Matrix random_orthogonal(int n, aicn::Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Vector d = qr.matrixQR().diagonal();
  for (int j = 0; j < n; ++j)
    if (d[j] < 0) q.col(j) = -q.col(j);
  return q;
}

// Symmetric positive definite matrix with eigenvalues log-spaced across
// [1/sqrt(cond), sqrt(cond)], so the condition number is exactly `cond`.
inline Matrix random_spd(int n, double cond, aicn::Rng& rng) {
  Matrix q = random_orthogonal(n, rng);
  Vector eigs(n);
  const double lo = 1.0 / std::sqrt(cond);
  const double hi = std::sqrt(cond);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
    eigs[i] = lo * std::pow(hi / lo, t);
  }
  Matrix m = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

// Explicit symmetric inverse square root through an eigendecomposition.
inline Matrix inverse_sqrt(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  Vector inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

inline double spectral_norm(const Matrix& m) {
  Matrix s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  return std::max(std::abs(eig.eigenvalues().minCoeff()),
                  std::abs(eig.eigenvalues().maxCoeff()));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// Smooth strongly convex test objective
//   f(x) = 1/2 x^T Q x + sum_i c_i exp(<a_i, x>),
// with bounded third derivatives; handy for probing estimators and step
// oracles on something that is neither quadratic nor from the benchmark set.
class ExpQuadObjective final : public aicn::Objective {
 public:
  ExpQuadObjective(Matrix q, Matrix a, Vector c)
      : q_(std::move(q)), a_(std::move(a)), c_(std::move(c)) {}

  static ExpQuadObjective random(int dim, int terms, double cond, aicn::Rng& rng) {
    Matrix q = random_spd(dim, cond, rng);
    Matrix a(terms, dim);
    Vector c(terms);
    for (int i = 0; i < terms; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = 0.5 * rng.gaussian();
      c[i] = 0.2 + 0.8 * rng.uniform();
    }
    return ExpQuadObjective(std::move(q), std::move(a), std::move(c));
  }

  int dim() const override { return static_cast<int>(q_.rows()); }

  double value(const Vector& x) const override {
    const Vector z = a_ * x;
    double s = 0.5 * x.dot(q_ * x);
    for (int i = 0; i < z.size(); ++i) s += c_[i] * std::exp(z[i]);
    return s;
  }

  Vector gradient(const Vector& x) const override {
    const Vector z = a_ * x;
    Vector w(z.size());
    for (int i = 0; i < z.size(); ++i) w[i] = c_[i] * std::exp(z[i]);
    return q_ * x + a_.transpose() * w;
  }

  Matrix hessian(const Vector& x) const override {
    const Vector z = a_ * x;
    Vector w(z.size());
    for (int i = 0; i < z.size(); ++i) w[i] = c_[i] * std::exp(z[i]);
    return q_ + a_.transpose() * w.asDiagonal() * a_;
  }

 private:
  Matrix q_;
  Matrix a_;
  Vector c_;
};

}  // namespace testsupport
