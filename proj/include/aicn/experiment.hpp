#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aicn/config.hpp"
#include "aicn/optimize.hpp"
#include "aicn/theory.hpp"

namespace aicn {

// Header "k,time_s,f,grad_l2,grad_dual,alpha,lambda,step_norm_x", one row per
// trace record, doubles printed with %.17g. For a fixed config every column
// except time_s is bit-identical across repeated runs.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

// Output directory for a config, honoring the AICN_BENCH_OUTDIR environment
// override.
std::filesystem::path effective_output_dir(const RunConfig& config);

struct MethodOutcome {
  MethodConfig config;
  std::string status;  // "ok" or a failure category such as "not_positive_definite"
  std::string error;   // failure message when status != "ok"
  std::optional<RunResult> result;
  std::string csv_path;  // relative to the output directory

  bool ok() const { return status == "ok"; }
};

struct ExperimentResult {
  std::vector<MethodOutcome> methods;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  std::optional<ConcordanceEstimate> probe;
  std::filesystem::path out_dir;
  std::string summary_path;
};

// Runs every configured method and writes one trace CSV per method plus
// comparison plots and summary.json. One method failing is recorded in its
// outcome and does not abort the others. When the config asks for a
// reference solution it is computed first and enables the suboptimality
// plots and the convergence-envelope diagnostics in the summary.
ExperimentResult run_experiment(const RunConfig& config);

// Builds the objective, runs the first configured method and estimates the
// concordance constants on `samples` pairs around the trajectory box.
ConcordanceEstimate probe_experiment(const RunConfig& config, int samples);

struct SweepSpec {
  std::string param;  // "L_est" | "L2" | "alpha"
  double lo = 0.0;
  double hi = 0.0;
  double factor = 2.0;
};

struct SweepPoint {
  double value;
  bool monotone;
  double final_f;     // NaN when the run failed
  std::string error;  // failure message; a failed run counts as non-monotone
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double chosen;
  MethodConfig chosen_config;
};

// Geometric grid search over one constant of config.methods[method_index].
// A grid point is monotone when f never increases along its trace beyond a
// relative slack of 1e-12. The most aggressive monotone point wins: largest
// for "alpha", smallest for "L_est"/"L2". Throws NoMonotonePoint when the
// whole grid fails.
SweepResult tune_monotone(const RunConfig& config, int method_index, const SweepSpec& sweep);

// High-accuracy minimizer: damped Newton runs with the estimate escalated
// tenfold on every failed attempt, restarting from the best iterate so far.
// Returns (x*, f(x*)); throws NumericalError when the tolerance on the dual
// gradient norm is never reached.
std::pair<Vector, double> reference_solution(const Objective& obj, const Vector& x0,
                                             double tol = 1e-13,
                                             std::optional<double> l_est = std::nullopt);

// Tabulates the closed-form stepsize against the two classical damped-Newton
// rules on a log-spaced grid of dual gradient norms; writes stepsizes.csv
// (header "grad_dual,alpha_aicn,alpha_damped_b,alpha_damped_c") and
// stepsizes.svg into out_dir.
void stepsize_comparison(double l_value, double gd_lo, double gd_hi, int points,
                         const std::filesystem::path& out_dir);

}  // namespace aicn
