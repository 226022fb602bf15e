#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aicn/objective.hpp"
#include "aicn/optimize.hpp"

namespace aicn {

struct SynthSpec {
  int m = 0;
  int d = 0;
  std::uint64_t seed = 0;
};

struct ObjectiveSpec {
  std::string kind;  // "logistic" | "lower_bound" | "quadratic"

  // logistic: either a dataset file or a synthetic generator
  std::string dataset_path;
  std::optional<SynthSpec> synth;
  std::optional<int> dim_hint;
  bool normalize = true;

  // lower_bound and quadratic
  int d = 0;
  double cond = 100.0;      // quadratic: eigenvalue spread of H0
  std::uint64_t seed = 1;   // quadratic: instance seed

  double mu = 0.0;

  void validate() const;
};

struct StartSpec {
  std::string kind = "zeros";  // "zeros" | "constant"
  double value = 0.0;

  void validate() const;
};

struct ReferenceSpec {
  double tol = 1e-13;
  std::optional<double> l_est;
};

struct ProbeSpec {
  int samples = 256;
  double inflate = 0.5;
  std::uint64_t seed = 17;
};

// One benchmark task: an objective, a start point, the methods to compare and
// the stop rule. Mirrors the JSON config files key for key.
struct RunConfig {
  std::string name;
  ObjectiveSpec objective;
  StartSpec x0;
  std::vector<MethodConfig> methods;
  StopRule stop;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool plots = true;
  std::optional<ReferenceSpec> reference;
  std::optional<ProbeSpec> probe;

  void validate() const;
};

// Strict parsers: unknown keys, missing required constants or out-of-domain
// values raise ConfigError. Neither touches dataset files.
RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config_file(const std::string& path);

// Instantiates the configured objective; this is where dataset files are
// read (Error on missing file, ParseError on malformed content).
std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec);

Vector make_start_point(const StartSpec& spec, int dim);

}  // namespace aicn
