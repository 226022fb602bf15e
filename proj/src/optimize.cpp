#include "aicn/optimize.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

namespace aicn {

namespace {

struct Eval {
  double f;
  Vector g;
  Matrix h;
};

Eval evaluate(const Objective& obj, const Vector& x) {
  Eval e{obj.value(x), obj.gradient(x), obj.hessian(x)};
  if (!std::isfinite(e.f) || !e.g.allFinite() || !e.h.allFinite()) {
    throw NumericalError("objective produced non-finite values");
  }
  return e;
}

// Re-throws step failures with the iteration index prepended, preserving the
// exception type so callers can still dispatch on it.
template <class Fn>
auto at_iteration(int k, Fn&& fn) -> decltype(fn()) {
  const auto tag = [k](const char* what) {
    return "iteration " + std::to_string(k) + ": " + what;
  };
  try {
    return fn();
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(tag(e.what()));
  } catch (const SubproblemNotConverged& e) {
    throw SubproblemNotConverged(tag(e.what()));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e.what()));
  }
}

// One step leaving x; `ev` holds f/g/H at x, `factor` the Cholesky factor of
// the Hessian and `grad_dual` the dual gradient norm there.
StepOutcome compute_step(const MethodConfig& cfg, const Vector& x, const Eval& ev,
                         const CholeskyFactor& factor, double grad_dual) {
  StepOutcome out;
  switch (cfg.method) {
    case Method::aicn: {
      const double a = aicn_stepsize(cfg.l_est * grad_dual);
      out.x_next = x - a * factor.solve(ev.g);
      out.info = {a, 0.0, a * grad_dual};
      break;
    }
    case Method::newton: {
      out.x_next = x - factor.solve(ev.g);
      out.info = {1.0, 0.0, grad_dual};
      break;
    }
    case Method::damped_fixed: {
      out.x_next = x - cfg.alpha * factor.solve(ev.g);
      out.info = {cfg.alpha, 0.0, cfg.alpha * grad_dual};
      break;
    }
    case Method::glob_reg_newton: {
      const double lam = std::sqrt(cfg.l2 * ev.g.norm());
      Matrix shifted = ev.h;
      shifted.diagonal().array() += lam;
      const Vector step = cholesky(shifted).solve(ev.g);
      out.x_next = x - step;
      out.info = {1.0, lam, hessian_norm(step, factor)};
      break;
    }
    case Method::cubic_newton: {
      double lam = 0.0;
      const Vector step = solve_cubic_model(ev.h, ev.g, cfg.l2, cfg.subproblem_tol, &lam);
      out.x_next = x + step;
      out.info = {1.0, lam, hessian_norm(step, factor)};
      break;
    }
  }
  if (!out.x_next.allFinite()) throw NumericalError("step produced non-finite iterate");
  return out;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::aicn: return "aicn";
    case Method::cubic_newton: return "cubic_newton";
    case Method::glob_reg_newton: return "glob_reg_newton";
    case Method::damped_fixed: return "damped_fixed";
    case Method::newton: return "newton";
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : {Method::aicn, Method::cubic_newton, Method::glob_reg_newton,
                   Method::damped_fixed, Method::newton}) {
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iters: return "max_iters";
    case StopReason::time_budget: return "time_budget";
  }
  return "unknown";
}

void MethodConfig::validate() const {
  switch (method) {
    case Method::aicn:
      if (!std::isfinite(l_est) || !(l_est > 0.0)) {
        throw ConfigError("aicn needs a positive finite L_est");
      }
      break;
    case Method::cubic_newton:
      if (!std::isfinite(l2) || !(l2 > 0.0)) {
        throw ConfigError("cubic_newton needs a positive finite L2");
      }
      if (!(subproblem_tol > 0.0)) {
        throw ConfigError("cubic_newton needs a positive subproblem tolerance");
      }
      break;
    case Method::glob_reg_newton:
      if (!std::isfinite(l2) || !(l2 > 0.0)) {
        throw ConfigError("glob_reg_newton needs a positive finite L2");
      }
      break;
    case Method::damped_fixed:
      if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("damped_fixed needs alpha in (0, 1]");
      }
      break;
    case Method::newton:
      break;
  }
}

std::string MethodConfig::label() const {
  std::ostringstream os;
  os << method_name(method);
  switch (method) {
    case Method::aicn:
      os << "(L_est=" << l_est << ")";
      break;
    case Method::cubic_newton:
    case Method::glob_reg_newton:
      os << "(L2=" << l2 << ")";
      break;
    case Method::damped_fixed:
      os << "(alpha=" << alpha << ")";
      break;
    case Method::newton:
      break;
  }
  return os.str();
}

void StopRule::validate() const {
  if (max_iters < 1) throw ConfigError("stop rule needs max_iters >= 1");
  if (!std::isfinite(grad_dual_tol) || grad_dual_tol < 0.0) {
    throw ConfigError("stop rule needs grad_dual_tol >= 0");
  }
  if (!std::isfinite(time_budget_s) || time_budget_s < 0.0) {
    throw ConfigError("stop rule needs time_budget_s >= 0");
  }
}

double aicn_stepsize(double g_value) {
  if (!std::isfinite(g_value) || g_value < 0.0) {
    throw NumericalError("stepsize needs a finite G >= 0");
  }
  return 2.0 / (1.0 + std::sqrt(1.0 + 2.0 * g_value));
}

std::pair<double, double> damped_reference_stepsizes(double g_value) {
  const double b = 1.0 / (1.0 + g_value);
  const double c = (1.0 + g_value) / (1.0 + g_value + g_value * g_value);
  return {b, c};
}

Vector solve_cubic_model(const Matrix& h, const Vector& g, double l2, double tol,
                         double* lambda_out) {
  if (h.rows() != h.cols() || h.rows() != g.size()) {
    throw DimensionMismatch("cubic model: H and g sizes disagree");
  }
  if (!(l2 > 0.0)) throw ConfigError("cubic model needs L2 > 0");
  const double g_norm = g.norm();
  if (g_norm == 0.0) {
    if (lambda_out) *lambda_out = 0.0;
    return Vector::Zero(g.size());
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("cubic model: eigendecomposition failed");
  }
  const Vector& evals = eig.eigenvalues();
  const Vector q = eig.eigenvectors().transpose() * g;

  // In the eigenbasis, h(s) = -(H + sI)^{-1} g has norm
  //   r(s) = sqrt(sum_i q_i^2 / (eval_i + s)^2),
  // and the optimal shift solves phi(s) = (l2/2) r(s) - s = 0. phi is convex
  // and strictly decreasing on (max(0, -eval_min), inf), so the root is
  // unique; bracket it and bisect, then polish with Newton.
  const double base = std::max(0.0, -evals.minCoeff());
  const auto radius = [&](double s) {
    double sum = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      const double d = evals[i] + s;
      sum += (q[i] / d) * (q[i] / d);
    }
    return std::sqrt(sum);
  };
  const auto phi = [&](double s) { return 0.5 * l2 * radius(s) - s; };

  // phi(hi) <= 0 because r(s) <= ||g|| / (s - base).
  double lo = base;
  double hi = 0.5 * base + std::sqrt(0.25 * base * base + 0.5 * l2 * g_norm);
  if (!(hi > lo)) hi = lo + 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 10; ++it) {
    const double r = radius(s);
    double dr = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      const double d = evals[i] + s;
      dr -= (q[i] * q[i]) / (d * d * d);
    }
    dr /= std::max(r, 1e-300);
    const double slope = 0.5 * l2 * dr - 1.0;
    const double next = s - (0.5 * l2 * r - s) / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) break;
    s = next;
  }

  Vector step_eig(q.size());
  for (int i = 0; i < q.size(); ++i) step_eig[i] = -q[i] / (evals[i] + s);
  Vector step = eig.eigenvectors() * step_eig;

  // Stationarity of the cubic model, measured with the original H and the
  // shift (l2/2)||step|| implied by the step itself.
  const double shift = 0.5 * l2 * step.norm();
  const double residual = (h * step + shift * step + g).norm();
  if (!(residual <= tol * g_norm) || !step.allFinite()) {
    std::ostringstream os;
    os << "cubic model stationarity residual " << residual << " exceeds " << tol * g_norm;
    throw SubproblemNotConverged(os.str());
  }
  if (lambda_out) *lambda_out = s;
  return step;
}

StepOutcome aicn_step(const Objective& obj, const Vector& x, double l_est) {
  MethodConfig cfg;
  cfg.method = Method::aicn;
  cfg.l_est = l_est;
  cfg.validate();
  const Eval ev = evaluate(obj, x);
  const CholeskyFactor factor = cholesky(ev.h);
  return compute_step(cfg, x, ev, factor, dual_norm(ev.g, factor));
}

StepOutcome cubic_newton_step(const Objective& obj, const Vector& x, double l2,
                              double subproblem_tol) {
  MethodConfig cfg;
  cfg.method = Method::cubic_newton;
  cfg.l2 = l2;
  cfg.subproblem_tol = subproblem_tol;
  cfg.validate();
  const Eval ev = evaluate(obj, x);
  const CholeskyFactor factor = cholesky(ev.h);
  return compute_step(cfg, x, ev, factor, dual_norm(ev.g, factor));
}

StepOutcome glob_reg_newton_step(const Objective& obj, const Vector& x, double l2) {
  MethodConfig cfg;
  cfg.method = Method::glob_reg_newton;
  cfg.l2 = l2;
  cfg.validate();
  const Eval ev = evaluate(obj, x);
  const CholeskyFactor factor = cholesky(ev.h);
  return compute_step(cfg, x, ev, factor, dual_norm(ev.g, factor));
}

StepOutcome damped_newton_step(const Objective& obj, const Vector& x, double alpha) {
  MethodConfig cfg;
  cfg.method = Method::damped_fixed;
  cfg.alpha = alpha;
  cfg.validate();
  const Eval ev = evaluate(obj, x);
  const CholeskyFactor factor = cholesky(ev.h);
  return compute_step(cfg, x, ev, factor, dual_norm(ev.g, factor));
}

RunResult run(const Objective& obj, const Vector& x0, const MethodConfig& config,
              const StopRule& stop) {
  config.validate();
  stop.validate();
  if (x0.size() != obj.dim()) throw DimensionMismatch("run: x0 has wrong dimension");
  if (!x0.allFinite()) throw NumericalError("run: x0 has non-finite entries");

  RunResult out;
  Vector x = x0;
  Eval ev = at_iteration(0, [&] { return evaluate(obj, x); });

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  for (int k = 0;; ++k) {
    const double elapsed =
        k == 0 ? 0.0 : std::chrono::duration<double>(clock::now() - t0).count();
    const CholeskyFactor factor = at_iteration(k, [&] { return cholesky(ev.h); });
    const double gd = at_iteration(k, [&] { return dual_norm(ev.g, factor); });
    const double gl2 = ev.g.norm();
    out.iterates.push_back(x);

    std::optional<StopReason> done;
    if (gd <= stop.grad_dual_tol) {
      done = StopReason::tolerance;
    } else if (k >= stop.max_iters) {
      done = StopReason::max_iters;
    } else if (stop.time_budget_s > 0.0 && elapsed >= stop.time_budget_s) {
      done = StopReason::time_budget;
    }
    if (done) {
      out.trace.push_back({k, elapsed, ev.f, gl2, gd, 0.0, 0.0, 0.0});
      out.reason = *done;
      return out;
    }

    StepOutcome step =
        at_iteration(k, [&] { return compute_step(config, x, ev, factor, gd); });
    Eval next = at_iteration(k, [&] { return evaluate(obj, step.x_next); });
    out.trace.push_back(
        {k, elapsed, ev.f, gl2, gd, step.info.alpha, step.info.lambda, step.info.step_norm_x});
    x = std::move(step.x_next);
    ev = std::move(next);
  }
}

}  // namespace aicn
