#include "robgev/sim_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "robgev/error.hpp"

namespace robgev {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  const json* v = find(obj, key);
  return v ? number(*v, path + "." + key) : fallback;
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback, const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 1) fail(path + "." + key, "expected a positive integer");
  return v->get<std::size_t>();
}

std::uint64_t seed_or(const json& obj, std::uint64_t fallback, const std::string& path) {
  const json* v = find(obj, "seed");
  if (!v) return fallback;
  if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0)) {
    fail(path + ".seed", "expected a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

GevParams params(const json& j, const std::string& path) {
  expect_object(j, path);
  const double mu = number_or(j, "mu", 0.0, path);
  const double sigma = number_or(j, "sigma", 1.0, path);
  const double xi = number_or(j, "xi", 0.0, path);
  if (!(sigma > 0.0)) fail(path + ".sigma", "scale must be positive");
  return {mu, sigma, xi};
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(path + "." + key, "unknown key");
  }
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON (") + e.what() + ")");
  }
  expect_object(root, "$");
  check_keys(root, {"seed", "workers", "estimators", "fit", "screen", "scenarios", "sweeps", "ratio_table"}, "$");

  SimulationConfig cfg;
  cfg.seed = seed_or(root, cfg.seed, "$");
  if (const json* w = find(root, "workers")) {
    if (!w->is_number_integer() || w->get<long long>() < 0) fail("$.workers", "expected a nonnegative integer");
    cfg.workers = w->get<unsigned>();
  }

  if (const json* fit = find(root, "fit")) {
    expect_object(*fit, "$.fit");
    check_keys(*fit, {"max_iterations", "tolerance", "restarts", "xi_lower_margin"}, "$.fit");
    cfg.fit.max_iterations = static_cast<int>(count_or(*fit, "max_iterations", cfg.fit.max_iterations, "$.fit"));
    cfg.fit.tolerance = number_or(*fit, "tolerance", cfg.fit.tolerance, "$.fit");
    if (!(cfg.fit.tolerance > 0.0)) fail("$.fit.tolerance", "must be positive");
    cfg.fit.xi_lower_margin = number_or(*fit, "xi_lower_margin", cfg.fit.xi_lower_margin, "$.fit");
    if (const json* r = find(*fit, "restarts")) {
      if (!r->is_number_integer() || r->get<long long>() < 0) fail("$.fit.restarts", "expected a nonnegative integer");
      cfg.fit.restarts = r->get<int>();
    }
  }

  if (const json* sc = find(root, "screen")) {
    expect_object(*sc, "$.screen");
    check_keys(*sc, {"mu_min", "mu_max", "sigma_max"}, "$.screen");
    cfg.screen.mu_min = number_or(*sc, "mu_min", cfg.screen.mu_min, "$.screen");
    cfg.screen.mu_max = number_or(*sc, "mu_max", cfg.screen.mu_max, "$.screen");
    cfg.screen.sigma_max = number_or(*sc, "sigma_max", cfg.screen.sigma_max, "$.screen");
  }

  const json* est = find(root, "estimators");
  if (!est) fail("$.estimators", "missing");
  if (!est->is_array() || est->empty()) fail("$.estimators", "expected a nonempty array");
  for (std::size_t i = 0; i < est->size(); ++i) {
    const std::string path = "$.estimators[" + std::to_string(i) + "]";
    const json& e = (*est)[i];
    expect_object(e, path);
    check_keys(e, {"name", "alpha"}, path);
    const json* a = find(e, "alpha");
    if (!a) fail(path + ".alpha", "missing");
    const double alpha = number(*a, path + ".alpha");
    if (!(alpha >= 0.0)) fail(path + ".alpha", "must be >= 0");
    EstimatorSpec spec = alpha == 0.0 ? ml_estimator() : mdpd_estimator(alpha);
    if (const json* name = find(e, "name")) {
      if (!name->is_string()) fail(path + ".name", "expected a string");
      spec.name = name->get<std::string>();
    }
    cfg.estimators.push_back(spec);
  }

  if (const json* list = find(root, "scenarios")) {
    if (!list->is_array()) fail("$.scenarios", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string path = "$.scenarios[" + std::to_string(i) + "]";
      const json& s = (*list)[i];
      expect_object(s, path);
      check_keys(s, {"id", "epsilon", "base", "contaminant", "n", "replicates", "seed"}, path);
      ContaminationScenario sc;
      sc.id = s.value("id", "scenario_" + std::to_string(i));
      sc.epsilon = number_or(s, "epsilon", 0.0, path);
      if (!(sc.epsilon >= 0.0 && sc.epsilon <= 1.0)) fail(path + ".epsilon", "must lie in [0, 1]");
      const json* base = find(s, "base");
      if (!base) fail(path + ".base", "missing");
      sc.base = params(*base, path + ".base");
      const json* cont = find(s, "contaminant");
      sc.contaminant = cont ? params(*cont, path + ".contaminant") : sc.base;
      sc.n = count_or(s, "n", sc.n, path);
      sc.replicates = count_or(s, "replicates", sc.replicates, path);
      sc.seed = seed_or(s, cfg.seed, path);
      cfg.scenarios.push_back(std::move(sc));
    }
  }

  if (const json* list = find(root, "sweeps")) {
    if (!list->is_array()) fail("$.sweeps", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string path = "$.sweeps[" + std::to_string(i) + "]";
      const json& s = (*list)[i];
      expect_object(s, path);
      check_keys(s, {"id", "kind", "epsilon", "base", "n", "replicates", "seed", "grid"}, path);
      SweepSpec sw;
      const json* kind = find(s, "kind");
      if (!kind || !kind->is_string()) fail(path + ".kind", "expected \"shape\" or \"scale\"");
      const auto k = kind->get<std::string>();
      if (k == "shape") {
        sw.kind = SweepKind::Shape;
      } else if (k == "scale") {
        sw.kind = SweepKind::Scale;
      } else {
        fail(path + ".kind", "expected \"shape\" or \"scale\", got \"" + k + "\"");
      }
      sw.id = s.value("id", "sweep_" + std::to_string(i));
      sw.epsilon = number_or(s, "epsilon", sw.epsilon, path);
      if (!(sw.epsilon >= 0.0 && sw.epsilon <= 1.0)) fail(path + ".epsilon", "must lie in [0, 1]");
      if (const json* base = find(s, "base")) sw.base = params(*base, path + ".base");
      sw.n = count_or(s, "n", sw.n, path);
      sw.replicates = count_or(s, "replicates", sw.replicates, path);
      sw.seed = seed_or(s, cfg.seed, path);
      if (const json* g = find(s, "grid")) {
        sw.grid = number_list(*g, path + ".grid");
        if (sw.kind == SweepKind::Scale) {
          for (std::size_t j = 0; j < sw.grid.size(); ++j) {
            if (!(sw.grid[j] > 0.0)) fail(path + ".grid[" + std::to_string(j) + "]", "scale must be positive");
          }
        }
      }
      cfg.sweeps.push_back(std::move(sw));
    }
  }

  if (const json* r = find(root, "ratio_table")) {
    const std::string path = "$.ratio_table";
    expect_object(*r, path);
    check_keys(*r, {"xi_grid", "alpha_grid", "n", "replicates", "seed"}, path);
    RatioSpec rs;
    const json* xg = find(*r, "xi_grid");
    const json* ag = find(*r, "alpha_grid");
    if (!xg) fail(path + ".xi_grid", "missing");
    if (!ag) fail(path + ".alpha_grid", "missing");
    rs.xi_grid = number_list(*xg, path + ".xi_grid");
    rs.alpha_grid = number_list(*ag, path + ".alpha_grid");
    for (std::size_t j = 0; j < rs.xi_grid.size(); ++j) {
      if (!(rs.xi_grid[j] < 1.0)) fail(path + ".xi_grid[" + std::to_string(j) + "]", "shape must be < 1");
    }
    for (std::size_t j = 0; j < rs.alpha_grid.size(); ++j) {
      if (!(rs.alpha_grid[j] > 0.0)) fail(path + ".alpha_grid[" + std::to_string(j) + "]", "alpha must be > 0");
    }
    rs.n = count_or(*r, "n", rs.n, path);
    rs.replicates = count_or(*r, "replicates", rs.replicates, path);
    rs.seed = seed_or(*r, cfg.seed, path);
    cfg.ratio = rs;
  }
  return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_simulation_config(ss.str());
}

SimulationOutput run_simulation(const SimulationConfig& config, const RunOptions& options) {
  SimulationOutput out;
  RunOptions opts = options;
  opts.fit = config.fit;
  opts.screen = config.screen;
  for (const auto& sc : config.scenarios) {
    out.scenarios.push_back(run_scenario(sc, config.estimators, opts));
    const auto& w = out.scenarios.back().warnings;
    out.warnings.insert(out.warnings.end(), w.begin(), w.end());
  }
  if (!config.sweeps.empty()) out.failures = failure_table(config.sweeps, config.estimators, opts);
  if (config.ratio) {
    const auto& r = *config.ratio;
    out.ratio = ratio_table(r.xi_grid, r.alpha_grid, r.n, r.replicates, r.seed, opts);
    out.warnings.insert(out.warnings.end(), out.ratio->diagnostics.begin(), out.ratio->diagnostics.end());
  }
  return out;
}

std::vector<std::string> write_simulation_outputs(const std::string& directory,
                                                  const SimulationOutput& output) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorKind::FileUnreadable, "cannot create '" + directory + "': " + ec.message());
  std::vector<std::string> written;
  auto open = [&](const char* name) {
    const std::string path = (fs::path(directory) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::FileUnreadable, "cannot write '" + path + "'");
    written.push_back(path);
    return f;
  };
  std::vector<ReplicationReport> all = output.scenarios;
  if (output.failures) all.insert(all.end(), output.failures->reports.begin(), output.failures->reports.end());
  if (output.ratio) all.insert(all.end(), output.ratio->reports.begin(), output.ratio->reports.end());
  {
    auto f = open("summary.csv");
    write_summary_csv(f, all);
  }
  {
    auto f = open("replicates.csv");
    write_replicates_csv(f, all);
  }
  if (output.failures) {
    auto f = open("failures.csv");
    write_failures_csv(f, *output.failures);
  }
  if (output.ratio) {
    auto f = open("ratio_table.csv");
    write_ratio_csv(f, *output.ratio);
  }
  return written;
}

}  // namespace robgev
