#include "aicn/objective.hpp"

#include <cmath>

namespace aicn {

namespace {

// log(1 + e^z) without overflow for large positive z.
double softplus(double z) {
  if (z > 30.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dim(const Vector& x, int d, const char* who) {
  if (x.size() != d) throw DimensionMismatch(std::string(who) + ": point has wrong dimension");
}

}  // namespace

LogisticObjective::LogisticObjective(Dataset data, double mu)
    : data_(std::move(data)), mu_(mu) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    throw ConfigError("logistic objective needs a non-empty dataset");
  }
  if (!(mu >= 0.0)) throw ConfigError("logistic objective needs mu >= 0");
}

double LogisticObjective::value(const Vector& x) const {
  check_dim(x, dim(), "logistic value");
  const Vector margins = data_.features * x;
  double s = 0.0;
  for (int i = 0; i < data_.rows(); ++i) {
    s += softplus(-data_.labels[i] * margins[i]);
  }
  return s / data_.rows() + 0.5 * mu_ * x.squaredNorm();
}

Vector LogisticObjective::gradient(const Vector& x) const {
  check_dim(x, dim(), "logistic gradient");
  const Vector margins = data_.features * x;
  Vector w(data_.rows());
  for (int i = 0; i < data_.rows(); ++i) {
    w[i] = -data_.labels[i] * sigmoid(-data_.labels[i] * margins[i]);
  }
  return data_.features.transpose() * w / data_.rows() + mu_ * x;
}

Matrix LogisticObjective::hessian(const Vector& x) const {
  check_dim(x, dim(), "logistic hessian");
  const Vector margins = data_.features * x;
  Vector w(data_.rows());
  for (int i = 0; i < data_.rows(); ++i) {
    // sigma'(z) = sigma(z) sigma(-z); independent of the +-1 label.
    w[i] = sigmoid(margins[i]) * sigmoid(-margins[i]);
  }
  Matrix h = data_.features.transpose() * (w / data_.rows()).asDiagonal() * data_.features;
  h.diagonal().array() += mu_;
  return h;
}

LowerBoundObjective::LowerBoundObjective(int d, double mu) : d_(d), mu_(mu) {
  if (d < 1) throw ConfigError("lower-bound objective needs dimension >= 1");
  if (!(mu >= 0.0)) throw ConfigError("lower-bound objective needs mu >= 0");
  a_ = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    a_(j, j) = 1.0;
    if (j + 1 < d) a_(j, j + 1) = -1.0;
  }
}

double LowerBoundObjective::value(const Vector& x) const {
  check_dim(x, d_, "lower-bound value");
  const Vector t = a_ * x;
  double s = 0.0;
  for (int j = 0; j < d_; ++j) s += std::abs(t[j]) * t[j] * t[j];
  return s / d_ - x[0] + 0.5 * mu_ * x.squaredNorm();
}

Vector LowerBoundObjective::gradient(const Vector& x) const {
  check_dim(x, d_, "lower-bound gradient");
  const Vector t = a_ * x;
  Vector cube_grad(d_);
  // d/dt |t|^3 = 3 |t| t = 3 sign(t) t^2.
  for (int j = 0; j < d_; ++j) cube_grad[j] = 3.0 * std::abs(t[j]) * t[j];
  Vector g = a_.transpose() * cube_grad / d_ + mu_ * x;
  g[0] -= 1.0;
  return g;
}

Matrix LowerBoundObjective::hessian(const Vector& x) const {
  check_dim(x, d_, "lower-bound hessian");
  const Vector t = a_ * x;
  Vector w(d_);
  for (int j = 0; j < d_; ++j) w[j] = 6.0 * std::abs(t[j]) / d_;
  Matrix h = a_.transpose() * w.asDiagonal() * a_;
  h.diagonal().array() += mu_;
  return h;
}

QuadraticObjective::QuadraticObjective(Matrix h0, Vector b)
    : h0_(std::move(h0)), b_(std::move(b)) {
  if (h0_.rows() != h0_.cols() || h0_.rows() != b_.size()) {
    throw DimensionMismatch("quadratic objective: H0 and b sizes disagree");
  }
}

double QuadraticObjective::value(const Vector& x) const {
  check_dim(x, dim(), "quadratic value");
  return 0.5 * x.dot(h0_ * x) - b_.dot(x);
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  check_dim(x, dim(), "quadratic gradient");
  return h0_ * x - b_;
}

Matrix QuadraticObjective::hessian(const Vector& x) const {
  check_dim(x, dim(), "quadratic hessian");
  return h0_;
}

LinearChangeOfVariables::LinearChangeOfVariables(const Objective& inner, Matrix a)
    : inner_(&inner), a_(std::move(a)) {
  if (a_.rows() != inner.dim() || a_.rows() != a_.cols()) {
    throw DimensionMismatch("change of variables: map must be square and match the objective");
  }
}

double LinearChangeOfVariables::value(const Vector& y) const {
  check_dim(y, dim(), "substituted value");
  return inner_->value(a_ * y);
}

Vector LinearChangeOfVariables::gradient(const Vector& y) const {
  check_dim(y, dim(), "substituted gradient");
  return a_.transpose() * inner_->gradient(a_ * y);
}

Matrix LinearChangeOfVariables::hessian(const Vector& y) const {
  check_dim(y, dim(), "substituted hessian");
  return a_.transpose() * inner_->hessian(a_ * y) * a_;
}

DerivativeCheck finite_diff_check(const Objective& obj, const Vector& x, double step) {
  const int d = obj.dim();
  check_dim(x, d, "finite_diff_check");
  const Vector g = obj.gradient(x);
  const Matrix h = obj.hessian(x);

  double grad_err = 0.0;
  Matrix h_fd(d, d);
  Vector e = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    e[i] = step;
    const double f_plus = obj.value(x + e);
    const double f_minus = obj.value(x - e);
    grad_err = std::max(grad_err, std::abs((f_plus - f_minus) / (2.0 * step) - g[i]));
    h_fd.col(i) = (obj.gradient(x + e) - obj.gradient(x - e)) / (2.0 * step);
    e[i] = 0.0;
  }
  const double hess_err = (h_fd - h).cwiseAbs().maxCoeff();

  DerivativeCheck out;
  out.grad_rel_err = grad_err / std::max(1.0, g.cwiseAbs().maxCoeff());
  out.hess_rel_err = hess_err / std::max(1.0, h.cwiseAbs().maxCoeff());
  return out;
}

}  // namespace aicn
