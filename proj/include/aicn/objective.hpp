#pragma once

#include <utility>

#include "aicn/dataset.hpp"
#include "aicn/linalg.hpp"

namespace aicn {

// Twice continuously differentiable convex function on R^d.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;
};

// Regularized logistic regression over a binary dataset:
//   f(x) = (1/m) sum_i log(1 + exp(-b_i <a_i, x>)) + (mu/2) ||x||^2.
// All three oracles use overflow-safe branches of log(1+e^z) and the sigmoid.
class LogisticObjective final : public Objective {
 public:
  LogisticObjective(Dataset data, double mu);

  int dim() const override { return data_.cols(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;

  const Dataset& data() const { return data_; }
  double mu() const { return mu_; }

 private:
  Dataset data_;
  double mu_;
};

// Worst-case construction for second-order methods:
//   f(x) = (1/d) sum_j |(A x)_j|^3 - x_1 + (mu/2) ||x||^2,
// where A is upper bidiagonal with ones on the diagonal and -1 above it.
// The cube of |t| is twice differentiable, so no smoothing is applied.
class LowerBoundObjective final : public Objective {
 public:
  LowerBoundObjective(int d, double mu);

  int dim() const override { return d_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;

  double mu() const { return mu_; }
  const Matrix& chain_matrix() const { return a_; }

 private:
  int d_;
  double mu_;
  Matrix a_;
};

// f(x) = 1/2 x^T H0 x - <b, x> with a fixed s.p.d. H0.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix h0, Vector b);

  int dim() const override { return static_cast<int>(h0_.rows()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;

 private:
  Matrix h0_;
  Vector b_;
};

// Coordinate substitution phi(y) = f(A y) for invertible A. Gradient is
// A^T g(Ay) and Hessian A^T H(Ay) A; used to exercise affine invariance.
// Keeps only a reference to the inner objective.
class LinearChangeOfVariables final : public Objective {
 public:
  LinearChangeOfVariables(const Objective& inner, Matrix a);

  int dim() const override { return static_cast<int>(a_.cols()); }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  Matrix hessian(const Vector& y) const override;

  const Matrix& map() const { return a_; }

 private:
  const Objective* inner_;
  Matrix a_;
};

struct DerivativeCheck {
  double grad_rel_err;
  double hess_rel_err;
};

// Central-difference check of gradient and Hessian at x. Errors are max-abs
// deviations relative to max(1, max-abs of the analytic quantity).
DerivativeCheck finite_diff_check(const Objective& obj, const Vector& x, double step = 1e-5);

}  // namespace aicn
