#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeno/models.hpp"

namespace zeno {

struct ConfigError : Error {
  using Error::Error;
};

enum class ModelKind { bell3, bell3_epsilon, minimal, helix, custom };
enum class OutputFormat { csv, json };

extern const std::vector<std::string> kObservableNames;

struct SweepConfig {
  ModelKind model = ModelKind::bell3;
  std::map<std::string, double> params;  // scalar model parameters
  std::string custom_path;               // model file for ModelKind::custom

  std::string axis_name;            // empty: single point from params
  std::vector<double> axis_values;  // resolved grid
  std::vector<double> gammas;
  std::vector<std::string> observables;

  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;

  static SweepConfig from_json_text(const std::string& text);
  static SweepConfig from_file(const std::string& path);
};

struct SweepRecord {
  double axis_value = 0.0;
  double gamma = 0.0;
  std::optional<double> purity_deficit, fidelity, reduced_fidelity, gap;
  std::optional<double> gamma_ch_theorem, gamma_ch_expansion;
  std::optional<bool> criterion;
  std::optional<bool> ness_unique;
  std::string status = "ok";  // "ok", "non_unique", "error: ..."
  double wall_time_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  bool any_error = false;
  bool any_non_unique = false;
};

/// Evaluate the grid (axis-major, gamma ascending). Points run on a worker
/// pool sized by ZENO_WORKERS (default: hardware concurrency); record order
/// and content are independent of the worker count. Solver failures are
/// recorded per point, never abort the sweep.
SweepResult run_sweep(const SweepConfig& config);

/// Serialize and atomically write (temp file + rename) per config.output_path;
/// empty path writes to the stream instead. CSV carries 17 significant digits
/// and leaves wall_time_ms empty so identical configs give identical bytes;
/// the JSON format includes the timings.
void write_sweep_output(const SweepConfig& config, const SweepResult& result,
                        std::ostream& fallback);
std::string sweep_to_csv(const SweepConfig& config, const SweepResult& result);
std::string sweep_to_json(const SweepConfig& config, const SweepResult& result);

/// Build the configured model at a given axis value (or plain params).
ModelBundle make_bundle(const SweepConfig& config, std::optional<double> axis_value,
                        double gamma);

struct CriterionSummary {
  CriterionReport criterion;
  GammaChReport gamma_ch;
  SingularityScan scan;
  std::string verdict;  // "yes", "no", "singular"
  std::string detail;
};

/// Criterion + characteristic-strength report for the configured model;
/// optionally runs the numeric fit route over fit_gammas.
CriterionSummary report_criterion(const ModelBundle& bundle,
                                  const std::vector<double>& fit_gammas = {});
std::string criterion_to_text(const SweepConfig& config, const CriterionSummary& s);
std::string criterion_to_json(const SweepConfig& config, const CriterionSummary& s);

}  // namespace zeno
