// zenotarget CLI: steady states, targeting criterion reports and parameter
// sweeps for dissipative pure-state preparation.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeno/model_io.hpp"
#include "zeno/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNonUnique = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_sweep(const std::string& config_path, bool strict) {
  const zeno::SweepConfig config = zeno::SweepConfig::from_file(config_path);
  const zeno::SweepResult result = zeno::run_sweep(config);
  zeno::write_sweep_output(config, result, std::cout);
  if (!config.output_path.empty())
    std::cerr << "wrote " << result.records.size() << " records to " << config.output_path
              << "\n";
  if (strict && result.any_non_unique) {
    std::cerr << "error: non-unique NESS encountered (--strict)\n";
    return kExitNonUnique;
  }
  if (result.any_error) {
    std::cerr << "error: solver failures recorded in the output\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_criterion(const std::string& config_path, bool as_json, bool with_fit) {
  const zeno::SweepConfig config = zeno::SweepConfig::from_file(config_path);
  const zeno::ModelBundle bundle = zeno::make_bundle(config, std::nullopt, 1.0);
  if (!bundle.note.empty()) std::cerr << "note: " << bundle.note << "\n";
  std::vector<double> fit_gammas;
  if (with_fit) fit_gammas = {100.0, 200.0, 400.0};
  const zeno::CriterionSummary summary = zeno::report_criterion(bundle, fit_gammas);
  std::cout << (as_json ? zeno::criterion_to_json(config, summary)
                        : zeno::criterion_to_text(config, summary));
  return kExitOk;
}

int cmd_ness(const std::string& config_path, double gamma, bool strict) {
  const zeno::SweepConfig config = zeno::SweepConfig::from_file(config_path);
  const zeno::ModelBundle bundle = zeno::make_bundle(config, std::nullopt, gamma);
  const zeno::NessResult res = zeno::ness(bundle.model);

  nlohmann::json j;
  j["gamma"] = gamma;
  j["residual"] = res.residual;
  j["nullity"] = res.nullity;
  j["unique"] = res.unique;
  j["purity_deficit"] = zeno::purity_deficit(res.rho);
  j["fidelity"] = zeno::fidelity(res.rho, zeno::full_target_state(bundle));
  j["reduced_fidelity"] =
      zeno::reduced_fidelity(res.rho, bundle.target_state, bundle.model.layout);
  std::cout << j.dump(2) << "\n";
  if (strict && !res.unique) {
    std::cerr << "error: non-unique NESS (--strict)\n";
    return kExitNonUnique;
  }
  return kExitOk;
}

int cmd_spectrum(const std::string& config_path, double gamma, int count) {
  const zeno::SweepConfig config = zeno::SweepConfig::from_file(config_path);
  const zeno::ModelBundle bundle = zeno::make_bundle(config, std::nullopt, gamma);
  const zeno::SpectrumResult res = zeno::spectrum(bundle.model);

  nlohmann::json j;
  j["gamma"] = gamma;
  j["gap"] = res.gap;
  j["tau_relax"] = res.tau_relax;
  auto evs = nlohmann::json::array();
  const int n = std::min<int>(count, static_cast<int>(res.eigenvalues.size()));
  for (int i = 0; i < n; ++i)
    evs.push_back({res.eigenvalues(i).real(), res.eigenvalues(i).imag()});
  j["leading_eigenvalues"] = evs;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& path) {
  const zeno::ModelBundle bundle = zeno::read_model_file(path);
  const auto& layout = bundle.model.layout;
  std::cout << "model ok: dim=" << layout.dim() << " (d0=" << layout.d0()
            << ", d1=" << layout.d1() << "), jumps=" << bundle.model.jumps.size()
            << ", gamma=" << fmt(bundle.model.gamma) << "\n";
  const zeno::CriterionSummary summary = zeno::report_criterion(bundle);
  std::cout << "lambda=" << fmt(summary.criterion.lambda)
            << " |kappa|=" << fmt(std::abs(summary.criterion.kappa))
            << " residual=" << fmt(summary.criterion.residual_norm) << "\n";
  std::cout << "verdict: target reachable in Zeno limit: " << summary.verdict << " ("
            << summary.detail << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative pure-state targeting toolkit"};
  app.require_subcommand(1);

  std::string config_path, model_path;
  bool strict = false, as_json = false, with_fit = false;
  double gamma = 1.0;
  int count = 8;

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_flag("--strict", strict, "exit 4 when a non-unique NESS is encountered");

  auto* crit = app.add_subcommand("criterion", "targeting criterion report");
  crit->add_option("config", config_path, "JSON config file")->required();
  crit->add_flag("--json", as_json, "emit JSON instead of text");
  crit->add_flag("--fit", with_fit, "also run the numeric Gamma_ch fit route");

  auto* ness_cmd = app.add_subcommand("ness", "steady state at a fixed gamma");
  ness_cmd->add_option("config", config_path, "JSON config file")->required();
  ness_cmd->add_option("--gamma", gamma, "dissipative strength")->required();
  ness_cmd->add_flag("--strict", strict, "exit 4 when the NESS is not unique");

  auto* spec = app.add_subcommand("spectrum", "generator spectrum at a fixed gamma");
  spec->add_option("config", config_path, "JSON config file")->required();
  spec->add_option("--gamma", gamma, "dissipative strength")->required();
  spec->add_option("--count", count, "number of leading eigenvalues to print");

  auto* ingest = app.add_subcommand("ingest", "validate a model file and report the criterion");
  ingest->add_option("file", model_path, "model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, strict);
    if (crit->parsed()) return cmd_criterion(config_path, as_json, with_fit);
    if (ness_cmd->parsed()) return cmd_ness(config_path, gamma, strict);
    if (spec->parsed()) return cmd_spectrum(config_path, gamma, count);
    if (ingest->parsed()) return cmd_ingest(model_path);
  } catch (const zeno::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const zeno::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const zeno::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
