#pragma once

#include <Eigen/Core>

#include "aicn/errors.hpp"

namespace aicn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Lower-triangular Cholesky factor L with H = L L^T. Successful construction
// certifies that H passed the positive-definiteness pivot test.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Matrix lower);

  int dim() const { return static_cast<int>(lower_.rows()); }
  const Matrix& lower() const { return lower_; }

  // Solves H v = b.
  Vector solve(const Vector& b) const;
  // Solves L w = b (forward substitution only). ||w||_2 is the dual local
  // norm of b when H is a Hessian.
  Vector forward_solve(const Vector& b) const;
  // Solves L W = B columnwise.
  Matrix forward_solve(const Matrix& b) const;
  // Returns L L^T.
  Matrix reconstruct() const;

 private:
  Matrix lower_;
};

// Factors a symmetric positive definite matrix (the lower triangle is read).
// Throws NotPositiveDefinite when any pivot falls below
// 1e-14 * max(diagonal), and NumericalError on non-finite input.
CholeskyFactor cholesky(const Matrix& h);

// Local norm ||v||_x = sqrt(<H v, v>) induced by a Hessian H at x.
double hessian_norm(const Vector& v, const Matrix& h);
double hessian_norm(const Vector& v, const CholeskyFactor& factor);

// Dual local norm ||g||*_x = sqrt(<g, H^{-1} g>), computed as ||L^{-1} g||_2.
double dual_norm(const Vector& g, const CholeskyFactor& factor);
double dual_norm(const Vector& g, const Matrix& h);

// Operator norm of a symmetric M measured in the metric of s.p.d. H:
// max_{v != 0} |<M v, v>| / <H v, v>, the largest |eigenvalue| of
// L^{-1} M L^{-T}. Invariant under congruence (M, H) -> (A^T M A, A^T H A).
double metric_operator_norm(const Matrix& m, const CholeskyFactor& factor);
double metric_operator_norm(const Matrix& m, const Matrix& h);

}  // namespace aicn
