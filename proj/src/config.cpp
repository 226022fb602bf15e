#include "aicn/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "aicn/dataset.hpp"
#include "aicn/rng.hpp"

namespace aicn {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
  }
}

template <class T>
T get_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + ": key '" + key + "' has the wrong type");
  }
}

template <class T>
T get_field_or(const json& j, const char* key, T fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  return get_field<T>(j, key, where);
}

MethodConfig parse_method(const json& j, int index) {
  std::ostringstream where;
  where << "methods[" << index << "]";
  const std::string w = where.str();
  if (!j.is_object()) throw ConfigError(w + ": expected an object");
  require_keys(j, {"method", "L_est", "L2", "alpha", "subproblem_tol"}, w.c_str());

  MethodConfig cfg;
  const std::string name = get_field<std::string>(j, "method", w.c_str());
  const auto method = method_from_name(name);
  if (!method) throw ConfigError(w + ": unknown method '" + name + "'");
  cfg.method = *method;

  // Each method must be given its own constant explicitly; silently running
  // a default would defeat the point of tuned configurations.
  switch (cfg.method) {
    case Method::aicn:
      cfg.l_est = get_field<double>(j, "L_est", w.c_str());
      break;
    case Method::cubic_newton:
    case Method::glob_reg_newton:
      cfg.l2 = get_field<double>(j, "L2", w.c_str());
      break;
    case Method::damped_fixed:
      cfg.alpha = get_field<double>(j, "alpha", w.c_str());
      break;
    case Method::newton:
      break;
  }
  cfg.subproblem_tol = get_field_or<double>(j, "subproblem_tol", cfg.subproblem_tol, w.c_str());
  cfg.validate();
  return cfg;
}

RunConfig parse_config_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  require_keys(root,
               {"name", "objective", "x0", "methods", "stop", "output_dir", "seed", "plots",
                "reference", "probe"},
               "config");

  RunConfig cfg;
  cfg.name = get_field<std::string>(root, "name", "config");

  const json& obj = root.contains("objective") ? root.at("objective") : json::object();
  if (!root.contains("objective")) throw ConfigError("config: missing key 'objective'");
  require_keys(obj,
               {"kind", "dataset", "synth", "dim_hint", "normalize", "d", "cond", "seed", "mu"},
               "objective");
  cfg.objective.kind = get_field<std::string>(obj, "kind", "objective");
  cfg.objective.dataset_path = get_field_or<std::string>(obj, "dataset", "", "objective");
  if (obj.contains("synth")) {
    const json& sy = obj.at("synth");
    require_keys(sy, {"m", "d", "seed"}, "objective.synth");
    SynthSpec s;
    s.m = get_field<int>(sy, "m", "objective.synth");
    s.d = get_field<int>(sy, "d", "objective.synth");
    s.seed = get_field<std::uint64_t>(sy, "seed", "objective.synth");
    cfg.objective.synth = s;
  }
  if (obj.contains("dim_hint")) {
    cfg.objective.dim_hint = get_field<int>(obj, "dim_hint", "objective");
  }
  cfg.objective.normalize = get_field_or<bool>(obj, "normalize", true, "objective");
  cfg.objective.d = get_field_or<int>(obj, "d", 0, "objective");
  cfg.objective.cond = get_field_or<double>(obj, "cond", 100.0, "objective");
  cfg.objective.seed = get_field_or<std::uint64_t>(obj, "seed", 1, "objective");
  cfg.objective.mu = get_field_or<double>(obj, "mu", 0.0, "objective");

  if (root.contains("x0")) {
    const json& x0 = root.at("x0");
    require_keys(x0, {"kind", "value"}, "x0");
    cfg.x0.kind = get_field_or<std::string>(x0, "kind", "zeros", "x0");
    cfg.x0.value = get_field_or<double>(x0, "value", 0.0, "x0");
  }

  const json& methods = root.contains("methods") ? root.at("methods") : json::array();
  if (!methods.is_array() || methods.empty()) {
    throw ConfigError("config: 'methods' must be a non-empty array");
  }
  for (int i = 0; i < static_cast<int>(methods.size()); ++i) {
    cfg.methods.push_back(parse_method(methods.at(i), i));
  }

  if (root.contains("stop")) {
    const json& stop = root.at("stop");
    require_keys(stop, {"max_iters", "grad_dual_tol", "time_budget_s"}, "stop");
    cfg.stop.max_iters = get_field_or<int>(stop, "max_iters", cfg.stop.max_iters, "stop");
    cfg.stop.grad_dual_tol =
        get_field_or<double>(stop, "grad_dual_tol", cfg.stop.grad_dual_tol, "stop");
    cfg.stop.time_budget_s =
        get_field_or<double>(stop, "time_budget_s", cfg.stop.time_budget_s, "stop");
  }

  cfg.output_dir = get_field_or<std::string>(root, "output_dir", cfg.output_dir, "config");
  cfg.seed = get_field_or<std::uint64_t>(root, "seed", 0, "config");
  cfg.plots = get_field_or<bool>(root, "plots", true, "config");

  if (root.contains("reference")) {
    const json& ref = root.at("reference");
    require_keys(ref, {"tol", "L_est"}, "reference");
    ReferenceSpec r;
    r.tol = get_field_or<double>(ref, "tol", r.tol, "reference");
    if (ref.contains("L_est")) r.l_est = get_field<double>(ref, "L_est", "reference");
    cfg.reference = r;
  }
  if (root.contains("probe")) {
    const json& probe = root.at("probe");
    require_keys(probe, {"samples", "inflate", "seed"}, "probe");
    ProbeSpec p;
    p.samples = get_field_or<int>(probe, "samples", p.samples, "probe");
    p.inflate = get_field_or<double>(probe, "inflate", p.inflate, "probe");
    p.seed = get_field_or<std::uint64_t>(probe, "seed", p.seed, "probe");
    cfg.probe = p;
  }

  cfg.validate();
  return cfg;
}

}  // namespace

void ObjectiveSpec::validate() const {
  if (kind == "logistic") {
    const bool has_file = !dataset_path.empty();
    const bool has_synth = synth.has_value();
    if (has_file == has_synth) {
      throw ConfigError("logistic objective needs exactly one of 'dataset' or 'synth'");
    }
    if (has_synth && (synth->m < 1 || synth->d < 1)) {
      throw ConfigError("synthetic dataset needs m >= 1 and d >= 1");
    }
    if (dim_hint && *dim_hint < 1) throw ConfigError("dim_hint must be >= 1");
  } else if (kind == "lower_bound") {
    if (d < 1) throw ConfigError("lower_bound objective needs d >= 1");
  } else if (kind == "quadratic") {
    if (d < 1) throw ConfigError("quadratic objective needs d >= 1");
    if (!(cond >= 1.0)) throw ConfigError("quadratic objective needs cond >= 1");
  } else {
    throw ConfigError("unknown objective kind '" + kind + "'");
  }
  if (!std::isfinite(mu) || mu < 0.0) throw ConfigError("mu must be finite and >= 0");
}

void StartSpec::validate() const {
  if (kind != "zeros" && kind != "constant") {
    throw ConfigError("x0.kind must be 'zeros' or 'constant'");
  }
  if (!std::isfinite(value)) throw ConfigError("x0.value must be finite");
}

void RunConfig::validate() const {
  if (name.empty()) throw ConfigError("config needs a non-empty name");
  objective.validate();
  x0.validate();
  if (methods.empty()) throw ConfigError("config needs at least one method");
  for (const MethodConfig& m : methods) m.validate();
  stop.validate();
  if (output_dir.empty()) throw ConfigError("config needs a non-empty output_dir");
  if (probe && probe->samples < 1) throw ConfigError("probe.samples must be >= 1");
  if (probe && !(probe->inflate >= 0.0)) throw ConfigError("probe.inflate must be >= 0");
  if (reference && !(reference->tol > 0.0)) throw ConfigError("reference.tol must be > 0");
}

RunConfig parse_run_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config_json(root);
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec) {
  spec.validate();
  if (spec.kind == "logistic") {
    Dataset data = spec.synth
                       ? synth_logistic(spec.synth->m, spec.synth->d, spec.synth->seed)
                       : load_libsvm(spec.dataset_path, spec.dim_hint);
    if (spec.normalize && !data.normalized) data = normalize_rows(std::move(data));
    return std::make_unique<LogisticObjective>(std::move(data), spec.mu);
  }
  if (spec.kind == "lower_bound") {
    return std::make_unique<LowerBoundObjective>(spec.d, spec.mu);
  }
  // quadratic: H0 = Q diag(log-spaced eigenvalues in [1/cond, 1]) Q^T + mu I
  // with a Haar-ish orthogonal Q drawn from the instance seed.
  Rng rng(spec.seed);
  Matrix gauss(spec.d, spec.d);
  for (int i = 0; i < spec.d; ++i)
    for (int j = 0; j < spec.d; ++j) gauss(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ();
  const Vector diag_signs = qr.matrixQR().diagonal();
  for (int j = 0; j < spec.d; ++j)
    if (diag_signs[j] < 0) q.col(j) = -q.col(j);
  Vector eigs(spec.d);
  for (int i = 0; i < spec.d; ++i) {
    const double t = spec.d == 1 ? 0.0 : static_cast<double>(i) / (spec.d - 1);
    eigs[i] = std::pow(spec.cond, -1.0 + t);  // 1/cond up to 1
  }
  Matrix h0 = q * eigs.asDiagonal() * q.transpose();
  h0 = 0.5 * (h0 + h0.transpose());
  h0.diagonal().array() += spec.mu;
  return std::make_unique<QuadraticObjective>(std::move(h0), rng.gaussian_vector(spec.d));
}

Vector make_start_point(const StartSpec& spec, int dim) {
  spec.validate();
  if (dim < 1) throw ConfigError("start point dimension must be >= 1");
  if (spec.kind == "zeros") return Vector::Zero(dim);
  return Vector::Constant(dim, spec.value);
}

}  // namespace aicn
