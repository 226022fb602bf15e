#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aicn/linalg.hpp"
#include "aicn/objective.hpp"

namespace aicn {

enum class Method {
  aicn,             // damped Newton with the closed-form affine-invariant stepsize
  cubic_newton,     // cubic regularization, subproblem solved exactly
  glob_reg_newton,  // Levenberg-style shift lambda = sqrt(L2 ||g||)
  damped_fixed,     // Newton direction with a fixed stepsize in (0, 1]
  newton,           // undamped Newton
};

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

struct MethodConfig {
  Method method = Method::aicn;
  double l_est = 1.0;   // aicn: estimate of the semi-strong self-concordance constant
  double l2 = 1.0;      // cubic_newton / glob_reg_newton: Lipschitz constant of the Hessian
  double alpha = 1.0;   // damped_fixed: stepsize
  double subproblem_tol = 1e-10;  // cubic_newton: stationarity residual, relative to ||g||

  // Throws ConfigError when a constant is outside its method's domain.
  void validate() const;
  // Human-readable tag such as "aicn(L_est=0.97)" for legends and summaries.
  std::string label() const;
};

struct StopRule {
  int max_iters = 500;
  double grad_dual_tol = 1e-10;  // on ||grad f(x)||*_x
  double time_budget_s = 0.0;    // 0 disables the budget

  void validate() const;
};

enum class StopReason { tolerance, max_iters, time_budget };

const char* stop_reason_name(StopReason r);

// One per-iteration record. Quantities a method does not produce are zero
// (lambda for pure Newton steps, everything step-related on the final row).
struct TraceRecord {
  int k;
  double time_s;       // elapsed since the run clock started at x_0
  double f;            // f(x_k)
  double grad_l2;      // ||grad f(x_k)||_2
  double grad_dual;    // ||grad f(x_k)||*_{x_k}
  double alpha;        // stepsize used by the step leaving x_k
  double lambda;       // regularization shift used by that step
  double step_norm_x;  // ||x_{k+1} - x_k||_{x_k}
};

struct RunResult {
  std::vector<TraceRecord> trace;  // one record per iterate, x_0 included
  std::vector<Vector> iterates;    // same length as trace
  StopReason reason = StopReason::max_iters;

  const Vector& final_x() const { return iterates.back(); }
  const TraceRecord& final_record() const { return trace.back(); }
  int steps() const { return static_cast<int>(trace.size()) - 1; }
};

// Stepsize alpha(G) = 2 / (1 + sqrt(1 + 2G)) with G = L_est ||grad||*_x,
// the unique positive root of (G/2) a^2 + a - 1 = 0. Decreasing in G,
// alpha(0) = 1. The form above avoids cancellation for small G.
double aicn_stepsize(double g_value);

// Two classical damped-Newton stepsize rules for self-concordant functions,
// 1/(1+G) and (1+G)/(1+G+G^2), used for stepsize comparisons.
std::pair<double, double> damped_reference_stepsizes(double g_value);

struct StepInfo {
  double alpha = 0.0;
  double lambda = 0.0;
  double step_norm_x = 0.0;
};

struct StepOutcome {
  Vector x_next;
  StepInfo info;
};

// Single steps from a point. Each factors/evaluates what it needs and throws
// NotPositiveDefinite / SubproblemNotConverged / NumericalError on failure.
StepOutcome aicn_step(const Objective& obj, const Vector& x, double l_est);
StepOutcome cubic_newton_step(const Objective& obj, const Vector& x, double l2,
                              double subproblem_tol = 1e-10);
StepOutcome glob_reg_newton_step(const Objective& obj, const Vector& x, double l2);
StepOutcome damped_newton_step(const Objective& obj, const Vector& x, double alpha);

// Minimizer of the cubic-regularized quadratic model
//   <g, h> + 1/2 h^T H h + (l2/6) ||h||^3
// through the scalar secular equation (l2/2) ||h(s)|| = s for the shift s,
// where h(s) = -(H + sI)^{-1} g. If lambda_out is set it receives the root.
// The stationarity residual ||(H + sI) h + g|| must come out below
// tol * ||g||, otherwise SubproblemNotConverged is thrown.
Vector solve_cubic_model(const Matrix& h, const Vector& g, double l2, double tol,
                         double* lambda_out = nullptr);

// Runs `config.method` from x0 until the stop rule fires. The trace gets one
// record per iterate including x0; time starts after the initial evaluation.
// Step failures propagate with the iteration index prepended.
RunResult run(const Objective& obj, const Vector& x0, const MethodConfig& config,
              const StopRule& stop);

}  // namespace aicn
