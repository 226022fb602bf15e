#include "aicn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "aicn/svg_plot.hpp"

namespace aicn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string categorize(const Error& e) {
  if (dynamic_cast<const NotPositiveDefinite*>(&e)) return "not_positive_definite";
  if (dynamic_cast<const SubproblemNotConverged*>(&e)) return "subproblem_not_converged";
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
  if (dynamic_cast<const NoMonotonePoint*>(&e)) return "no_monotone_point";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical_error";
  return "error";
}

bool trace_is_monotone(const std::vector<TraceRecord>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(trace[i - 1].f));
    if (trace[i].f > trace[i - 1].f + slack) return false;
  }
  return true;
}

// Replaces y-values that cannot sit on a log axis with the smallest positive
// value seen in the panel, so fully converged tails stay visible instead of
// silently disappearing. Returns false when the panel has no positive data.
bool clamp_for_log_axis(std::vector<Series>& series) {
  double floor_v = std::numeric_limits<double>::infinity();
  for (const Series& s : series) {
    for (double v : s.y) {
      if (std::isfinite(v) && v > 0.0) floor_v = std::min(floor_v, v);
    }
  }
  if (!std::isfinite(floor_v)) return false;
  for (Series& s : series) {
    for (double& v : s.y) {
      if (!std::isfinite(v) || v <= 0.0) v = floor_v;
    }
  }
  return true;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed while writing '" + path.string() + "'");
}

void emit_plots(const fs::path& dir, const std::string& name,
                const std::vector<MethodOutcome>& methods, std::optional<double> f_star) {
  std::vector<Series> f_iter, g_iter, sub_iter, sub_time;
  for (const MethodOutcome& mo : methods) {
    if (!mo.result) continue;
    Series sf{mo.config.label(), {}, {}};
    Series sg = sf, ss = sf, st = sf;
    for (const TraceRecord& r : mo.result->trace) {
      sf.x.push_back(r.k);
      sf.y.push_back(r.f);
      sg.x.push_back(r.k);
      sg.y.push_back(r.grad_l2);
      if (f_star) {
        ss.x.push_back(r.k);
        ss.y.push_back(r.f - *f_star);
        st.x.push_back(r.time_s);
        st.y.push_back(r.f - *f_star);
      }
    }
    f_iter.push_back(std::move(sf));
    g_iter.push_back(std::move(sg));
    if (f_star) {
      sub_iter.push_back(std::move(ss));
      sub_time.push_back(std::move(st));
    }
  }
  if (f_iter.empty()) return;

  PlotSpec spec;
  spec.title = name + ": objective value";
  spec.x_label = "iteration";
  spec.y_label = "f";
  write_text_file(dir / "objective.svg", render_line_plot(spec, f_iter));

  if (clamp_for_log_axis(g_iter)) {
    spec.title = name + ": gradient norm";
    spec.y_label = "||grad f||_2";
    spec.log_y = true;
    write_text_file(dir / "grad_norm.svg", render_line_plot(spec, g_iter));
  }
  if (f_star && clamp_for_log_axis(sub_iter)) {
    spec.title = name + ": suboptimality";
    spec.y_label = "f - f*";
    spec.log_y = true;
    write_text_file(dir / "suboptimality_iters.svg", render_line_plot(spec, sub_iter));
  }
  if (f_star && clamp_for_log_axis(sub_time)) {
    spec.title = name + ": suboptimality over time";
    spec.x_label = "seconds";
    spec.y_label = "f - f*";
    spec.log_y = true;
    write_text_file(dir / "suboptimality_time.svg", render_line_plot(spec, sub_time));
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "k,time_s,f,grad_l2,grad_dual,alpha,lambda,step_norm_x\n";
  char buf[320];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.k,
                  r.time_s, r.f, r.grad_l2, r.grad_dual, r.alpha, r.lambda, r.step_norm_x);
    out << buf;
  }
}

std::filesystem::path effective_output_dir(const RunConfig& config) {
  if (const char* env = std::getenv("AICN_BENCH_OUTDIR"); env != nullptr && *env != '\0') {
    return fs::path(env) / config.name;
  }
  return fs::path(config.output_dir);
}

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  ExperimentResult out;
  out.out_dir = effective_output_dir(config);
  fs::create_directories(out.out_dir);

  const std::unique_ptr<Objective> obj = make_objective(config.objective);
  const Vector x0 = make_start_point(config.x0, obj->dim());

  json summary;
  summary["name"] = config.name;
  summary["objective"] = {
      {"kind", config.objective.kind}, {"dim", obj->dim()}, {"mu", config.objective.mu}};

  if (config.reference) {
    try {
      auto [x_star, f_star] =
          reference_solution(*obj, x0, config.reference->tol, config.reference->l_est);
      summary["reference"] = {{"f_star", f_star}, {"tol", config.reference->tol}};
      out.x_star = std::move(x_star);
      out.f_star = f_star;
    } catch (const Error& e) {
      summary["reference"] = {{"status", categorize(e)}, {"error", e.what()}};
    }
  }

  // Duplicate method names get an ordinal suffix so CSVs never collide.
  std::map<std::string, int> uses, seen;
  for (const MethodConfig& mc : config.methods) ++uses[method_name(mc.method)];

  for (const MethodConfig& mc : config.methods) {
    MethodOutcome mo;
    mo.config = mc;
    std::string base = method_name(mc.method);
    const int ordinal = ++seen[base];
    if (uses[base] > 1) base += "_" + std::to_string(ordinal);
    try {
      RunResult r = run(*obj, x0, mc, config.stop);
      mo.status = "ok";
      mo.result = std::move(r);
      mo.csv_path = "trace_" + base + ".csv";
      std::ostringstream csv;
      write_trace_csv(csv, mo.result->trace);
      write_text_file(out.out_dir / mo.csv_path, csv.str());
    } catch (const Error& e) {
      mo.status = categorize(e);
      mo.error = e.what();
    }
    out.methods.push_back(std::move(mo));
  }

  if (config.probe) {
    std::vector<Vector> cloud;
    for (const MethodOutcome& mo : out.methods) {
      if (!mo.result) continue;
      cloud.insert(cloud.end(), mo.result->iterates.begin(), mo.result->iterates.end());
    }
    if (out.x_star) cloud.push_back(*out.x_star);
    if (!cloud.empty()) {
      try {
        const PairSampler sampler =
            PairSampler::around_points(cloud, config.probe->inflate, config.probe->seed);
        out.probe = probe_concordance(*obj, sampler, config.probe->samples);
        summary["probe"] = {{"l_semi_hat", out.probe->l_semi_hat},
                            {"l_alt_hat", out.probe->l_alt_hat},
                            {"samples", out.probe->samples},
                            {"sandwich_violations", out.probe->sandwich_violations}};
      } catch (const Error& e) {
        summary["probe"] = {{"status", categorize(e)}, {"error", e.what()}};
      }
    }
  }

  json jmethods = json::array();
  for (const MethodOutcome& mo : out.methods) {
    json jm;
    jm["label"] = mo.config.label();
    jm["method"] = method_name(mo.config.method);
    jm["status"] = mo.status;
    if (!mo.ok()) {
      jm["error"] = mo.error;
    } else {
      const RunResult& r = *mo.result;
      jm["csv"] = mo.csv_path;
      jm["steps"] = r.steps();
      jm["stop_reason"] = stop_reason_name(r.reason);
      jm["monotone_f"] = trace_is_monotone(r.trace);
      jm["final"] = {{"f", r.final_record().f},
                     {"grad_l2", r.final_record().grad_l2},
                     {"grad_dual", r.final_record().grad_dual},
                     {"time_s", r.final_record().time_s}};
      // The convergence-envelope diagnostics need both a reference point and
      // an estimate of the concordance constant, so they only apply to the
      // damped scheme that carries one.
      if (out.f_star && out.x_star && mo.config.method == Method::aicn) {
        const double d_hat = trajectory_diameter(*obj, r.iterates, *out.x_star);
        std::vector<double> f_values;
        f_values.reserve(r.trace.size());
        for (const TraceRecord& row : r.trace) f_values.push_back(row.f);
        const double excess =
            envelope_excess(f_values, *out.f_star, mo.config.l_est, d_hat);
        const double r_hat =
            level_radius_bound(*obj, r.iterates, *out.x_star, mo.config.l_est);
        jm["envelope"] = {{"d_hat", d_hat},
                          {"excess", excess},
                          {"holds", excess <= 0.0},
                          {"r_hat", r_hat},
                          {"r_hat_geq_d_hat", r_hat >= d_hat * (1.0 - 1e-12)}};
      }
    }
    jmethods.push_back(std::move(jm));
  }
  summary["methods"] = std::move(jmethods);

  if (config.plots) {
    emit_plots(out.out_dir, config.name, out.methods, out.f_star);
  }

  out.summary_path = "summary.json";
  write_text_file(out.out_dir / out.summary_path, summary.dump(2) + "\n");
  return out;
}

ConcordanceEstimate probe_experiment(const RunConfig& config, int samples) {
  config.validate();
  if (samples < 1) throw ConfigError("probe needs samples >= 1");
  const std::unique_ptr<Objective> obj = make_objective(config.objective);
  const Vector x0 = make_start_point(config.x0, obj->dim());
  const RunResult r = run(*obj, x0, config.methods.front(), config.stop);
  const ProbeSpec probe = config.probe.value_or(ProbeSpec{});
  const PairSampler sampler = PairSampler::around_points(r.iterates, probe.inflate, probe.seed);
  return probe_concordance(*obj, sampler, samples);
}

SweepResult tune_monotone(const RunConfig& config, int method_index, const SweepSpec& sweep) {
  config.validate();
  if (method_index < 0 || method_index >= static_cast<int>(config.methods.size())) {
    throw ConfigError("tune: method index out of range");
  }
  if (!(sweep.lo > 0.0) || !(sweep.hi >= sweep.lo) || !(sweep.factor > 1.0)) {
    throw ConfigError("tune: grid needs 0 < lo <= hi and factor > 1");
  }
  const Method method = config.methods[method_index].method;
  const bool applicable =
      (sweep.param == "L_est" && method == Method::aicn) ||
      (sweep.param == "L2" &&
       (method == Method::cubic_newton || method == Method::glob_reg_newton)) ||
      (sweep.param == "alpha" && method == Method::damped_fixed);
  if (!applicable) {
    throw ConfigError("tune: parameter '" + sweep.param + "' does not apply to method '" +
                      method_name(method) + "'");
  }

  const std::unique_ptr<Objective> obj = make_objective(config.objective);
  const Vector x0 = make_start_point(config.x0, obj->dim());

  SweepResult out;
  for (double v = sweep.lo; v <= sweep.hi * (1.0 + 1e-12); v *= sweep.factor) {
    SweepPoint pt{v, false, std::numeric_limits<double>::quiet_NaN(), ""};
    MethodConfig cfg = config.methods[method_index];
    if (sweep.param == "L_est") cfg.l_est = v;
    if (sweep.param == "L2") cfg.l2 = v;
    if (sweep.param == "alpha") cfg.alpha = v;
    try {
      cfg.validate();
      const RunResult r = run(*obj, x0, cfg, config.stop);
      pt.monotone = trace_is_monotone(r.trace);
      pt.final_f = r.final_record().f;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.points.push_back(std::move(pt));
  }

  // Pick the most aggressive monotone setting: the largest stepsize, or the
  // smallest regularization constant.
  const bool pick_largest = sweep.param == "alpha";
  bool found = false;
  for (const SweepPoint& pt : out.points) {
    if (!pt.monotone) continue;
    if (!found || (pick_largest ? pt.value > out.chosen : pt.value < out.chosen)) {
      out.chosen = pt.value;
      found = true;
    }
  }
  if (!found) {
    throw NoMonotonePoint("tune: no grid point of '" + sweep.param +
                          "' produced a monotone trace");
  }
  out.chosen_config = config.methods[method_index];
  if (sweep.param == "L_est") out.chosen_config.l_est = out.chosen;
  if (sweep.param == "L2") out.chosen_config.l2 = out.chosen;
  if (sweep.param == "alpha") out.chosen_config.alpha = out.chosen;
  return out;
}

std::pair<Vector, double> reference_solution(const Objective& obj, const Vector& x0,
                                             double tol, std::optional<double> l_est) {
  if (!(tol > 0.0)) throw ConfigError("reference solution needs tol > 0");
  double l = l_est.value_or(1.0);
  Vector start = x0;
  Vector best_x = x0;
  double best_gd = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 8; ++attempt) {
    MethodConfig cfg;
    cfg.method = Method::aicn;
    cfg.l_est = l;
    StopRule stop;
    stop.max_iters = 3000;
    stop.grad_dual_tol = tol;
    try {
      const RunResult r = run(obj, start, cfg, stop);
      if (r.final_record().grad_dual < best_gd) {
        best_gd = r.final_record().grad_dual;
        best_x = r.final_x();
      }
      if (r.reason == StopReason::tolerance) {
        return {r.final_x(), obj.value(r.final_x())};
      }
    } catch (const Error&) {
      // A failed attempt just escalates the constant like a stalled one.
    }
    start = best_x;
    l *= 10.0;
  }
  throw NumericalError("reference solution stalled above the requested tolerance");
}

void stepsize_comparison(double l_value, double gd_lo, double gd_hi, int points,
                         const std::filesystem::path& out_dir) {
  if (!(l_value > 0.0) || !(gd_lo > 0.0) || !(gd_hi > gd_lo) || points < 2) {
    throw ConfigError("stepsize comparison needs L > 0, 0 < min < max and points >= 2");
  }
  fs::create_directories(out_dir);

  Series sa{"closed form", {}, {}}, sb{"1/(1+G)", {}, {}}, sc{"(1+G)/(1+G+G^2)", {}, {}};
  std::ostringstream csv;
  csv << "grad_dual,alpha_aicn,alpha_damped_b,alpha_damped_c\n";
  char buf[200];
  for (int i = 0; i < points; ++i) {
    const double gd = gd_lo * std::pow(gd_hi / gd_lo, static_cast<double>(i) / (points - 1));
    const double g_value = l_value * gd;
    const double a = aicn_stepsize(g_value);
    const auto [b, c] = damped_reference_stepsizes(g_value);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", gd, a, b, c);
    csv << buf;
    sa.x.push_back(gd);
    sa.y.push_back(a);
    sb.x.push_back(gd);
    sb.y.push_back(b);
    sc.x.push_back(gd);
    sc.y.push_back(c);
  }
  write_text_file(out_dir / "stepsizes.csv", csv.str());

  PlotSpec spec;
  std::ostringstream title;
  title << "stepsize rules, L = " << l_value;
  spec.title = title.str();
  spec.x_label = "||grad f||*_x";
  spec.y_label = "stepsize";
  spec.log_x = true;
  spec.log_y = true;
  write_text_file(out_dir / "stepsizes.svg", render_line_plot(spec, {sa, sb, sc}));
}

}  // namespace aicn
