#include "zeno/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zeno/model_io.hpp"

namespace zeno {

using nlohmann::json;

const std::vector<std::string> kObservableNames = {
    "purity_deficit", "fidelity",           "reduced_fidelity",    "gap",
    "gamma_ch_theorem", "gamma_ch_expansion", "criterion"};

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_grid(const json& node, const std::string& where) {
  std::vector<double> out;
  if (node.is_array()) {
    for (const auto& v : node) {
      if (!v.is_number()) throw ConfigError(where + ": grid entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else if (node.is_object()) {
    const double from = node.value("from", 0.0);
    const double to = node.value("to", 0.0);
    const int points = node.value("points", 0);
    const std::string scale = node.value("scale", "linear");
    if (points < 1) throw ConfigError(where + ".points: must be >= 1");
    if (scale == "linear") {
      for (int i = 0; i < points; ++i)
        out.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    } else if (scale == "log") {
      if (from <= 0 || to <= 0) throw ConfigError(where + ": log grid needs positive bounds");
      const double lf = std::log10(from), lt = std::log10(to);
      for (int i = 0; i < points; ++i)
        out.push_back(std::pow(10.0, points == 1 ? lf : lf + (lt - lf) * i / (points - 1)));
    } else {
      throw ConfigError(where + ".scale: must be 'linear' or 'log'");
    }
  } else {
    throw ConfigError(where + ": expected array or {from,to,points[,scale]}");
  }
  if (out.empty()) throw ConfigError(where + ": grid is empty");
  return out;
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "bell3") return ModelKind::bell3;
  if (s == "bell3_epsilon") return ModelKind::bell3_epsilon;
  if (s == "minimal") return ModelKind::minimal;
  if (s == "helix") return ModelKind::helix;
  if (s == "custom") return ModelKind::custom;
  throw ConfigError("model: unknown kind '" + s +
                    "' (expected bell3|bell3_epsilon|minimal|helix|custom)");
}

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::bell3: return "bell3";
    case ModelKind::bell3_epsilon: return "bell3_epsilon";
    case ModelKind::minimal: return "minimal";
    case ModelKind::helix: return "helix";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

int worker_count(std::size_t tasks) {
  if (const char* env = std::getenv("ZENO_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<int>(std::min<std::size_t>(n, tasks));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min<std::size_t>(hw ? hw : 1, tasks));
}

}  // namespace

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  SweepConfig c;
  if (!j.contains("model") || !j["model"].is_string())
    throw ConfigError("config.model: required string field");
  c.model = parse_model_kind(j["model"].get<std::string>());

  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("config.params: must be an object");
    for (auto& [key, val] : j["params"].items()) {
      if (key == "path") {
        c.custom_path = val.get<std::string>();
      } else if (val.is_number()) {
        c.params[key] = val.get<double>();
      } else {
        throw ConfigError("config.params." + key + ": must be a number");
      }
    }
  }
  if (c.model == ModelKind::custom && c.custom_path.empty())
    throw ConfigError("config.params.path: required for model 'custom'");

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_object() || !s.contains("parameter"))
      throw ConfigError("config.sweep: needs 'parameter' plus a grid");
    c.axis_name = s["parameter"].get<std::string>();
    c.axis_values =
        s.contains("values") ? parse_grid(s["values"], "config.sweep.values")
                             : parse_grid(s, "config.sweep");
  }

  if (j.contains("gammas")) c.gammas = parse_grid(j["gammas"], "config.gammas");
  for (double g : c.gammas)
    if (!(g > 0)) throw ConfigError("config.gammas: all values must be > 0");

  if (j.contains("observables")) {
    if (!j["observables"].is_array())
      throw ConfigError("config.observables: must be an array of names");
    for (const auto& o : j["observables"]) {
      const std::string name = o.get<std::string>();
      if (std::find(kObservableNames.begin(), kObservableNames.end(), name) ==
          kObservableNames.end())
        throw ConfigError("config.observables: unknown observable '" + name + "'");
      c.observables.push_back(name);
    }
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.contains("path")) c.output_path = o["path"].get<std::string>();
    const std::string f = o.value("format", "csv");
    if (f == "csv")
      c.format = OutputFormat::csv;
    else if (f == "json")
      c.format = OutputFormat::json;
    else
      throw ConfigError("config.output.format: must be 'csv' or 'json'");
  }
  return c;
}

SweepConfig SweepConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ModelBundle make_bundle(const SweepConfig& config, std::optional<double> axis_value,
                        double gamma) {
  auto param = [&](const std::string& name, double fallback) {
    if (axis_value && config.axis_name == name) return *axis_value;
    auto it = config.params.find(name);
    return it == config.params.end() ? fallback : it->second;
  };
  auto int_param = [&](const std::string& name, int fallback) {
    const double v = param(name, fallback);
    if (v != std::floor(v)) throw ConfigError("parameter '" + name + "' must be an integer");
    return static_cast<int>(v);
  };

  switch (config.model) {
    case ModelKind::bell3:
      return bell3_model(param("lambda", 1.0), gamma);
    case ModelKind::bell3_epsilon:
      return bell3_epsilon_model(param("epsilon", 0.5), gamma);
    case ModelKind::minimal: {
      MinimalModelParams p = MinimalModelParams::fig4(int_param("n", 1));
      if (config.params.count("kappa") || config.axis_name == "kappa")
        p.kappa = param("kappa", 1.0);
      ModelBundle b = minimal_model(p, gamma);
      return b;
    }
    case ModelKind::helix: {
      HelixParams p;
      p.n = int_param("n", 4);
      p.theta = param("theta", M_PI / 2);
      p.gamma_twist = param("gamma_twist", M_PI / 4);
      return helix_model(p, gamma);
    }
    case ModelKind::custom: {
      ModelBundle b = read_model_file(config.custom_path);
      b.model.gamma = gamma;
      return b;
    }
  }
  throw ConfigError("unreachable model kind");
}

namespace {

struct AxisData {
  ModelBundle bundle;
  std::optional<CriterionReport> crit;
  std::optional<GammaChReport> gch;
  std::string error;
};

bool wants(const SweepConfig& c, const std::string& name) {
  return std::find(c.observables.begin(), c.observables.end(), name) != c.observables.end();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  if (config.gammas.empty()) throw ConfigError("config.gammas: required for sweeps");
  std::vector<std::optional<double>> axis;
  if (config.axis_values.empty())
    axis.push_back(std::nullopt);
  else
    for (double v : config.axis_values) axis.emplace_back(v);

  const bool needs_crit = wants(config, "criterion") || wants(config, "gamma_ch_theorem") ||
                          wants(config, "gamma_ch_expansion") ||
                          wants(config, "fidelity") || wants(config, "reduced_fidelity");
  const bool needs_gch =
      wants(config, "gamma_ch_theorem") || wants(config, "gamma_ch_expansion");

  // Axis-level work (model construction, criterion, gamma_ch) is gamma
  // independent; do it once per axis value.
  std::vector<AxisData> per_axis;
  per_axis.reserve(axis.size());
  for (const auto& av : axis) {
    AxisData a{make_bundle(config, av, config.gammas.front()), {}, {}, {}};
    try {
      if (needs_crit) a.crit = criterion(a.bundle);
      if (needs_gch && a.crit)
        a.gch = gamma_ch(a.bundle.model, decompose(a.bundle, *a.crit), *a.crit);
    } catch (const Error& e) {
      a.error = e.what();
    }
    per_axis.push_back(std::move(a));
  }

  struct Task {
    std::size_t axis_idx;
    double gamma;
  };
  std::vector<Task> tasks;
  for (std::size_t ai = 0; ai < axis.size(); ++ai)
    for (double g : config.gammas) tasks.push_back({ai, g});

  SweepResult result;
  result.records.resize(tasks.size());

  const bool needs_ness = wants(config, "purity_deficit") || wants(config, "fidelity") ||
                          wants(config, "reduced_fidelity");
  const bool needs_gap = wants(config, "gap");

  auto eval_point = [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const AxisData& a = per_axis[t.axis_idx];
    SweepRecord rec;
    rec.axis_value = axis[t.axis_idx].value_or(0.0);
    rec.gamma = t.gamma;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (!a.error.empty()) throw SolverError(a.error);
      if (a.crit && wants(config, "criterion")) rec.criterion = a.crit->satisfied;
      if (a.gch) {
        if (wants(config, "gamma_ch_theorem")) rec.gamma_ch_theorem = a.gch->gamma_ch_theorem;
        if (wants(config, "gamma_ch_expansion"))
          rec.gamma_ch_expansion = a.gch->gamma_ch_expansion;
      }
      if (needs_ness || needs_gap) {
        LindbladModel model = a.bundle.model;
        model.gamma = t.gamma;
        if (needs_ness) {
          NessResult nr = ness(model);
          rec.ness_unique = nr.unique;
          if (!nr.unique) {
            rec.status = "non_unique";
            result.any_non_unique = true;
          }
          if (wants(config, "purity_deficit")) rec.purity_deficit = purity_deficit(nr.rho);
          if (wants(config, "fidelity"))
            rec.fidelity = fidelity(nr.rho, full_target_state(a.bundle));
          if (wants(config, "reduced_fidelity"))
            rec.reduced_fidelity =
                reduced_fidelity(nr.rho, a.bundle.target_state, model.layout);
        }
        if (needs_gap) rec.gap = spectrum(model).gap;
      }
    } catch (const Error& e) {
      rec.status = std::string("error: ") + e.what();
      result.any_error = true;
    }
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    result.records[ti] = std::move(rec);
  };

  const int workers = worker_count(tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) eval_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) eval_point(i);
      });
    for (auto& th : pool) th.join();
  }
  return result;
}

namespace {

void append_optional(std::string& line, const std::optional<double>& v) {
  line += ',';
  if (v) line += fmt(*v);
}

}  // namespace

std::string sweep_to_csv(const SweepConfig& config, const SweepResult& result) {
  std::string out;
  out += "# zenotarget sweep, model=" + model_kind_name(config.model);
  if (!config.axis_name.empty()) out += ", axis=" + config.axis_name;
  out += "\n";
  out +=
      "# gnuplot columns: 1=axis_value 2=gamma 3=purity_deficit 4=fidelity "
      "5=reduced_fidelity 6=gap 7=gamma_ch_theorem 8=gamma_ch_expansion 9=criterion "
      "10=ness_unique 11=status 12=wall_time_ms\n";
  out += "# wall_time_ms is left empty in CSV so identical configs give identical bytes\n";
  out +=
      "axis_value,gamma,purity_deficit,fidelity,reduced_fidelity,gap,gamma_ch_theorem,"
      "gamma_ch_expansion,criterion,ness_unique,status,wall_time_ms\n";
  for (const auto& r : result.records) {
    std::string line = fmt(r.axis_value) + "," + fmt(r.gamma);
    append_optional(line, r.purity_deficit);
    append_optional(line, r.fidelity);
    append_optional(line, r.reduced_fidelity);
    append_optional(line, r.gap);
    append_optional(line, r.gamma_ch_theorem);
    append_optional(line, r.gamma_ch_expansion);
    line += ',';
    if (r.criterion) line += *r.criterion ? "1" : "0";
    line += ',';
    if (r.ness_unique) line += *r.ness_unique ? "1" : "0";
    line += ',' + r.status + ',';
    out += line + "\n";
  }
  return out;
}

namespace {

json record_to_json(const SweepRecord& r) {
  json j;
  j["axis_value"] = r.axis_value;
  j["gamma"] = r.gamma;
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = std::isfinite(*v) ? json(*v) : json(fmt(*v));
  };
  put("purity_deficit", r.purity_deficit);
  put("fidelity", r.fidelity);
  put("reduced_fidelity", r.reduced_fidelity);
  put("gap", r.gap);
  put("gamma_ch_theorem", r.gamma_ch_theorem);
  put("gamma_ch_expansion", r.gamma_ch_expansion);
  if (r.criterion) j["criterion"] = *r.criterion;
  if (r.ness_unique) j["ness_unique"] = *r.ness_unique;
  j["status"] = r.status;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

}  // namespace

std::string sweep_to_json(const SweepConfig& config, const SweepResult& result) {
  json j;
  j["model"] = model_kind_name(config.model);
  j["axis"] = config.axis_name;
  j["records"] = json::array();
  for (const auto& r : result.records) j["records"].push_back(record_to_json(r));
  return j.dump(2) + "\n";
}

void write_sweep_output(const SweepConfig& config, const SweepResult& result,
                        std::ostream& fallback) {
  const std::string payload = config.format == OutputFormat::csv
                                  ? sweep_to_csv(config, result)
                                  : sweep_to_json(config, result);
  if (config.output_path.empty()) {
    fallback << payload;
    return;
  }
  const std::string tmp = config.output_path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open output file " + tmp);
    f << payload;
  }
  std::filesystem::rename(tmp, config.output_path);
}

CriterionSummary report_criterion(const ModelBundle& bundle,
                                  const std::vector<double>& fit_gammas) {
  CriterionSummary s;
  s.criterion = criterion(bundle);
  BlockDecomposition decomp = decompose(bundle, s.criterion);
  s.scan = singularity_scan(decomp);
  if (s.criterion.satisfied || s.criterion.strong_criterion) {
    s.gamma_ch = gamma_ch(bundle.model, decomp, s.criterion);
    if (!fit_gammas.empty() && !s.gamma_ch.divergent)
      s.gamma_ch.gamma_ch_fit = gamma_ch_fit(bundle.model, fit_gammas);
  }

  if (!s.criterion.satisfied) {
    s.verdict = "no";
    s.detail = s.criterion.strong_criterion
                   ? "kappa = 0: strong criterion holds, weak criterion trivial"
                   : "targeting condition violated (residual outside tolerance)";
  } else if (s.gamma_ch.divergent) {
    s.verdict = "singular";
    if (s.gamma_ch.lambda0_degenerate) {
      s.detail = "lambda_0 degenerate with";
      for (Index a : s.scan.lambda_poles) s.detail += " lambda_" + std::to_string(a);
    } else {
      s.detail = "kernel coefficient matrix K is singular (det K ~ 0)";
    }
  } else {
    s.verdict = "yes";
    s.detail = "Gamma_ch finite";
  }
  return s;
}

std::string criterion_to_text(const SweepConfig& config, const CriterionSummary& s) {
  std::ostringstream out;
  out << "model: " << model_kind_name(config.model) << "\n";
  out << "lambda            = " << fmt(s.criterion.lambda) << "\n";
  out << "|kappa|           = " << fmt(std::abs(s.criterion.kappa)) << "\n";
  out << "residual norm     = " << fmt(s.criterion.residual_norm) << "  (tol "
      << fmt(s.criterion.tol) << " * ||H|| = " << fmt(s.criterion.tol * s.criterion.h_norm)
      << ")\n";
  out << "strong criterion  = " << (s.criterion.strong_criterion ? "yes" : "no") << "\n";
  out << "weak criterion    = " << (s.criterion.satisfied ? "satisfied" : "not satisfied")
      << "\n";
  out << "Gamma_ch theorem  = " << fmt(s.gamma_ch.gamma_ch_theorem) << "\n";
  out << "Gamma_ch expansion= " << fmt(s.gamma_ch.gamma_ch_expansion) << "\n";
  if (s.gamma_ch.gamma_ch_fit)
    out << "Gamma_ch fit      = " << fmt(*s.gamma_ch.gamma_ch_fit) << "\n";
  out << "det K             = " << fmt(s.gamma_ch.det_K) << "\n";
  out << "lambda_0 poles    =";
  if (s.scan.lambda_poles.empty())
    out << " none";
  else
    for (Index a : s.scan.lambda_poles) out << " alpha=" << a;
  out << "\n";
  out << "d_alpha           =";
  for (Index i = 0; i < s.scan.d_values.size(); ++i) out << " " << fmt(s.scan.d_values(i));
  out << "\n";
  out << "verdict: target reachable in Zeno limit: " << s.verdict << " (" << s.detail << ")\n";
  return out.str();
}

std::string criterion_to_json(const SweepConfig& config, const CriterionSummary& s) {
  json j;
  j["model"] = model_kind_name(config.model);
  j["lambda"] = s.criterion.lambda;
  j["kappa_abs"] = std::abs(s.criterion.kappa);
  j["residual_norm"] = s.criterion.residual_norm;
  j["strong_criterion"] = s.criterion.strong_criterion;
  j["satisfied"] = s.criterion.satisfied;
  auto put_inf = [](double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); };
  j["gamma_ch_theorem"] = put_inf(s.gamma_ch.gamma_ch_theorem);
  j["gamma_ch_expansion"] = put_inf(s.gamma_ch.gamma_ch_expansion);
  if (s.gamma_ch.gamma_ch_fit) j["gamma_ch_fit"] = *s.gamma_ch.gamma_ch_fit;
  j["det_K"] = s.gamma_ch.det_K;
  j["divergent"] = s.gamma_ch.divergent;
  j["lambda0_degenerate"] = s.gamma_ch.lambda0_degenerate;
  j["lambda_poles"] = s.scan.lambda_poles;
  std::vector<double> dv(s.scan.d_values.data(), s.scan.d_values.data() + s.scan.d_values.size());
  j["d_alpha"] = dv;
  j["verdict"] = s.verdict;
  j["detail"] = s.detail;
  return j.dump(2) + "\n";
}

}  // namespace zeno
