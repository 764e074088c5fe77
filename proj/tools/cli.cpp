#include "robgev/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "robgev/asymptotics.hpp"
#include "robgev/ingest.hpp"
#include "robgev/mdpd.hpp"
#include "robgev/metrics.hpp"
#include "robgev/sim_config.hpp"
#include "robgev/simlab.hpp"

namespace robgev::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ojson json_number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

unsigned env_workers() {
  if (const char* s = std::getenv("ROBGEV_WORKERS")) {
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s, s + std::char_traits<char>::length(s), v);
    if (ec == std::errc() && *ptr == '\0') return v;
  }
  return 0;
}

char parse_delimiter(const std::string& d) {
  if (d.empty() || d == "auto") return '\0';
  if (d == "tab" || d == "\\t") return '\t';
  if (d.size() == 1) return d[0];
  throw CLI::ValidationError("--delimiter", "expected a single character, 'tab' or 'auto'");
}

enum class Format { Human, Json, Csv };

void add_format(CLI::App* sub, Format& format) {
  sub->add_option("--format", format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"human", Format::Human}, {"json", Format::Json}, {"csv", Format::Csv}}))
      ->default_str("human");
}

std::string model_label(double alpha) {
  if (alpha == 0.0) return "MLE";
  std::ostringstream os;
  os << "MDPDE (alpha = " << alpha << ")";
  return os.str();
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string file;
  std::string column;
  std::string year_column;
  std::string delimiter = "auto";
  bool no_header = false;
  std::string station;
  std::vector<double> alphas{0.0, 0.1, 0.3};
  std::optional<double> drop_below;
  int restarts = 1;
  int max_iterations = 2000;
  int digits = 2;
  bool strict = false;
  Format format = Format::Human;
};

// All-digit names are 0-based indices.
ColumnRef column_ref(const std::string& s) {
  if (std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return static_cast<std::size_t>(std::stoull(s));
  }
  return s;
}

struct ModelFit {
  std::string label;
  double alpha;
  std::size_t n;
  FitResult fit;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  ParseOptions po;
  if (!a.column.empty()) po.value_column = column_ref(a.column);
  if (!a.year_column.empty()) po.year_column = column_ref(a.year_column);
  po.delimiter = parse_delimiter(a.delimiter);
  po.header = !a.no_header;
  po.station_id = a.station;
  const StationSeries series = load_series(a.file, po);
  for (const auto& d : series.diagnostics) err << "note: " << d << '\n';

  std::vector<ModelFit> fits;
  auto run_one = [&](const std::string& label, double alpha, const std::vector<double>& data) {
    MdpdConfig cfg;
    cfg.alpha = alpha;
    cfg.restarts = a.restarts;
    cfg.max_iterations = a.max_iterations;
    FitResult fit = fit_mdpd(data, cfg);
    try {
      attach_covariance(fit, data.size());
    } catch (const Error& e) {
      fit.messages.push_back(std::string("standard errors unavailable: ") + std::string(to_string(e.kind())) + ": " + e.what());
    }
    fits.push_back({label, alpha, data.size(), std::move(fit)});
  };

  std::size_t dropped = 0;
  if (a.drop_below) {
    std::vector<double> kept;
    for (double v : series.values) {
      if (v < *a.drop_below) {
        ++dropped;
      } else {
        kept.push_back(v);
      }
    }
    run_one("MLE (without PILFs)", 0.0, kept);
  }
  for (double alpha : a.alphas) {
    if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be >= 0");
    run_one(model_label(alpha), alpha, series.values);
  }

  bool all_converged = true;
  for (const auto& m : fits) {
    all_converged = all_converged && m.fit.converged;
    for (const auto& msg : m.fit.messages) err << m.label << ": " << msg << '\n';
  }

  static const char* kNames[3] = {"mu", "sigma", "xi"};
  auto value = [](const FitResult& f, int k) {
    return k == 0 ? f.params.mu() : k == 1 ? f.params.sigma() : f.params.xi();
  };

  if (a.format == Format::Json) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "fit";
    doc["station"] = series.station_id;
    doc["n"] = series.values.size();
    if (a.drop_below) {
      doc["drop_below"] = *a.drop_below;
      doc["dropped"] = dropped;
    }
    doc["fits"] = ojson::array();
    for (const auto& m : fits) {
      ojson f;
      f["model"] = m.label;
      f["alpha"] = m.alpha;
      f["n"] = m.n;
      f["converged"] = m.fit.converged;
      f["objective"] = json_number(m.fit.objective_value);
      for (int k = 0; k < 3; ++k) f["estimate"][kNames[k]] = value(m.fit, k);
      if (m.fit.std_errors) {
        for (int k = 0; k < 3; ++k) f["std_error"][kNames[k]] = json_number((*m.fit.std_errors)[k]);
      } else {
        f["std_error"] = nullptr;
      }
      f["messages"] = m.fit.messages;
      doc["fits"].push_back(f);
    }
    out << doc.dump(2) << '\n';
  } else if (a.format == Format::Csv) {
    out << "model,alpha,n,mu,mu_se,sigma,sigma_se,xi,xi_se,converged\n";
    for (const auto& m : fits) {
      out << '"' << m.label << "\"," << num(m.alpha) << ',' << m.n;
      for (int k = 0; k < 3; ++k) {
        out << ',' << num(value(m.fit, k)) << ','
            << (m.fit.std_errors ? num((*m.fit.std_errors)[k]) : std::string());
      }
      out << ',' << (m.fit.converged ? "true" : "false") << '\n';
    }
  } else {
    // One row per parameter, one "estimate (SE)" column per model.
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head{"station " + series.station_id};
    for (const auto& m : fits) head.push_back(m.label);
    cells.push_back(head);
    for (int k = 0; k < 3; ++k) {
      std::vector<std::string> row{kNames[k]};
      for (const auto& m : fits) {
        const std::string se = m.fit.std_errors ? fixed((*m.fit.std_errors)[k], a.digits) : "n/a";
        row.push_back(fixed(value(m.fit, k), a.digits) + " (" + se + ")");
      }
      cells.push_back(row);
    }
    std::vector<std::string> conv{"converged"};
    for (const auto& m : fits) conv.push_back(m.fit.converged ? "yes" : "no");
    cells.push_back(conv);
    std::vector<std::string> ns{"n"};
    for (const auto& m : fits) ns.push_back(std::to_string(m.n));
    cells.push_back(ns);

    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (std::size_t r = 0; r < cells.size(); ++r) {
      for (std::size_t c = 0; c < cells[r].size(); ++c) {
        if (c > 0) out << " | ";
        out << std::left << std::setw(static_cast<int>(width[c])) << cells[r][c];
      }
      out << '\n';
      if (r == 0) {
        for (std::size_t c = 0; c < width.size(); ++c) {
          if (c > 0) out << "-+-";
          out << std::string(width[c], '-');
        }
        out << '\n';
      }
    }
    if (a.drop_below) {
      out << dropped << " value(s) below " << *a.drop_below << " removed for MLE (without PILFs)\n";
    }
  }
  if (a.strict && !all_converged) {
    err << "error[NonConvergence]: at least one fit did not converge\n";
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- influence

struct ParamArgs {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

void add_params(CLI::App* sub, ParamArgs& p) {
  sub->add_option("--mu", p.mu, "Location")->capture_default_str();
  sub->add_option("--sigma", p.sigma, "Scale (> 0)")->capture_default_str();
  sub->add_option("--xi", p.xi, "Shape")->capture_default_str();
}

struct InfluenceArgs {
  ParamArgs params;
  std::vector<double> alphas{0.0, 0.1, 0.25, 0.5};
  double min_level = 1e-8;
  int per_decade = 4;
  std::vector<double> levels;
  Format format = Format::Csv;
};

int cmd_influence(const InfluenceArgs& a, std::ostream& out, std::ostream& err) {
  const GevParams p(a.params.mu, a.params.sigma, a.params.xi);
  if (!(a.min_level > 0.0 && a.min_level < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "--min-level must lie in (0, 0.5)");
  }
  std::vector<double> levels = a.levels.empty() ? geometric_level_grid(a.min_level, a.per_decade) : a.levels;
  for (double l : levels) {
    if (!(l > 0.0 && l < 1.0)) throw Error(ErrorKind::InvalidArgument, "levels must lie in (0, 1)");
  }
  struct Curve {
    double alpha;
    std::string status = "ok";
    std::vector<Eigen::Vector3d> values;
  };
  std::vector<Curve> curves;
  for (double alpha : a.alphas) {
    Curve c{alpha};
    try {
      const auto sc = compute_ujk(p, alpha);
      for (double l : levels) c.values.push_back(influence_at_level(l, sc));
    } catch (const Error& e) {
      c.status = std::string(to_string(e.kind())) + ": " + e.what();
      c.values.clear();
      err << "alpha=" << alpha << ": " << c.status << '\n';
    }
    curves.push_back(std::move(c));
  }
  static const char* kNames[3] = {"mu", "sigma", "xi"};
  if (a.format == Format::Json) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "influence";
    doc["params"] = {{"mu", p.mu()}, {"sigma", p.sigma()}, {"xi", p.xi()}};
    doc["levels"] = levels;
    doc["curves"] = ojson::array();
    for (const auto& c : curves) {
      ojson j;
      j["alpha"] = c.alpha;
      j["status"] = c.status;
      for (int k = 0; k < 3; ++k) {
        ojson arr = ojson::array();
        for (const auto& v : c.values) arr.push_back(json_number(v[k]));
        j[kNames[k]] = arr;
      }
      doc["curves"].push_back(j);
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "level";
  for (const auto& c : curves) {
    for (int k = 0; k < 3; ++k) out << ",if_" << kNames[k] << "_alpha" << num(c.alpha);
  }
  out << '\n';
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out << num(levels[i]);
    for (const auto& c : curves) {
      for (int k = 0; k < 3; ++k) out << ',' << (c.values.empty() ? std::string() : num(c.values[i][k]));
    }
    out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- asymvar

struct AsymvarArgs {
  double mu = 0.0;
  double sigma = 1.0;
  std::vector<double> xis;
  double xi_min = -0.4;
  double xi_max = 0.8;
  double xi_step = 0.05;
  std::vector<double> alphas{0.0, 0.1, 0.25, 0.5};
  Format format = Format::Csv;
};

int cmd_asymvar(const AsymvarArgs& a, std::ostream& out, std::ostream&) {
  std::vector<double> xis = a.xis;
  if (xis.empty()) {
    if (!(a.xi_step > 0.0) || a.xi_max < a.xi_min) {
      throw Error(ErrorKind::InvalidArgument, "need --xi-step > 0 and --xi-max >= --xi-min");
    }
    const auto steps = static_cast<long>(std::floor((a.xi_max - a.xi_min) / a.xi_step + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      // Round to the step's decimal grid so labels stay clean.
      xis.push_back(std::round((a.xi_min + static_cast<double>(k) * a.xi_step) * 1e10) / 1e10);
    }
  }
  struct Cell {
    double xi, alpha;
    std::optional<Eigen::Vector3d> var;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (double xi : xis) {
    for (double alpha : a.alphas) {
      Cell c{xi, alpha, std::nullopt};
      try {
        const auto sc = compute_ujk(GevParams(a.mu, a.sigma, xi), alpha);
        c.var = sc.cov.diagonal();
      } catch (const Error& e) {
        c.status = std::string(to_string(e.kind()));
      }
      cells.push_back(c);
    }
  }
  if (a.format == Format::Json) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "asymvar";
    doc["cells"] = ojson::array();
    for (const auto& c : cells) {
      ojson j{{"xi", c.xi}, {"alpha", c.alpha}, {"status", c.status}};
      j["var_mu"] = c.var ? json_number((*c.var)[0]) : ojson(nullptr);
      j["var_sigma"] = c.var ? json_number((*c.var)[1]) : ojson(nullptr);
      j["var_xi"] = c.var ? json_number((*c.var)[2]) : ojson(nullptr);
      doc["cells"].push_back(j);
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "xi,alpha,var_mu,var_sigma,var_xi,status\n";
  for (const auto& c : cells) {
    out << num(c.xi) << ',' << num(c.alpha);
    for (int k = 0; k < 3; ++k) out << ',' << (c.var ? num((*c.var)[k]) : std::string());
    out << ',' << c.status << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sample, w1

struct SampleArgs {
  ParamArgs params;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  Format format = Format::Human;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream&) {
  const auto xs = sample(a.n, GevParams(a.params.mu, a.params.sigma, a.params.xi), a.seed);
  if (a.format == Format::Json) {
    ojson doc{{"schema_version", kSchemaVersion}, {"command", "sample"}, {"seed", a.seed}, {"values", xs}};
    out << doc.dump() << '\n';
    return kExitOk;
  }
  if (a.format == Format::Csv) out << "value\n";
  for (double x : xs) out << num(x) << '\n';
  return kExitOk;
}

struct W1Args {
  ParamArgs first;
  ParamArgs second;
  std::string method = "quantile";
  Format format = Format::Human;
};

int cmd_w1(const W1Args& a, std::ostream& out, std::ostream&) {
  W1Request req{GevParams(a.first.mu, a.first.sigma, a.first.xi),
                GevParams(a.second.mu, a.second.sigma, a.second.xi)};
  req.method = a.method == "cdf" ? W1Method::CdfIntegral : W1Method::QuantileIntegral;
  const double d = wasserstein1(req);
  if (a.format == Format::Json) {
    ojson doc{{"schema_version", kSchemaVersion}, {"command", "w1"}, {"method", a.method}, {"value", d}};
    out << doc.dump() << '\n';
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", d);
    out << buf << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate, ratio-table

struct SimulateArgs {
  std::string config;
  std::string out_dir = "simulation_output";
  std::optional<unsigned> workers;
  Format format = Format::Human;
};

unsigned pick_workers(std::optional<unsigned> flag, unsigned config_value) {
  if (flag) return *flag;
  if (const unsigned env = env_workers(); env != 0) return env;
  return config_value;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const SimulationConfig cfg = load_simulation_config(a.config);
  RunOptions opts;
  opts.workers = pick_workers(a.workers, cfg.workers);
  const SimulationOutput result = run_simulation(cfg, opts);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  const auto files = write_simulation_outputs(a.out_dir, result);
  if (a.format == Format::Json) {
    ojson doc{{"schema_version", kSchemaVersion}, {"command", "simulate"}, {"files", files}};
    if (result.failures) {
      doc["failures"] = ojson::array();
      for (const auto& r : result.failures->rows) {
        doc["failures"].push_back({{"sweep_id", r.sweep_id}, {"estimator", r.estimator.name},
                                   {"failures", r.failures}, {"total", r.total}});
      }
    }
    out << doc.dump(2) << '\n';
  } else if (a.format == Format::Csv) {
    write_summary_csv(out, result.scenarios);
  } else {
    for (const auto& f : files) out << "wrote " << f << '\n';
    if (result.failures) write_failures_csv(out, *result.failures);
  }
  return kExitOk;
}

struct RatioArgs {
  std::vector<double> xis{-0.4, 0.0, 0.2, 0.4};
  std::vector<double> alphas{0.05, 0.1, 0.3};
  std::size_t n = 100;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  std::optional<unsigned> workers;
  Format format = Format::Csv;
};

int cmd_ratio(const RatioArgs& a, std::ostream& out, std::ostream& err) {
  RunOptions opts;
  opts.workers = pick_workers(a.workers, 0);
  const RatioTable t = ratio_table(a.xis, a.alphas, a.n, a.replicates, a.seed, opts);
  for (const auto& d : t.diagnostics) err << "warning: " << d << '\n';
  if (a.format == Format::Json) {
    ojson doc{{"schema_version", kSchemaVersion}, {"command", "ratio-table"}, {"xi_grid", t.xi_grid},
              {"alpha_grid", t.alpha_grid}, {"n", a.n}, {"replicates", a.replicates}, {"seed", a.seed}};
    ojson rows = ojson::array();
    for (const auto& r : t.ratios) {
      ojson row = ojson::array();
      for (double v : r) row.push_back(json_number(v));
      rows.push_back(row);
    }
    doc["ratios"] = rows;
    out << doc.dump(2) << '\n';
  } else if (a.format == Format::Csv) {
    write_ratio_csv(out, t);
  } else {
    out << std::setw(8) << "xi0\\a";
    for (double al : t.alpha_grid) out << std::setw(8) << al;
    out << '\n';
    for (std::size_t i = 0; i < t.xi_grid.size(); ++i) {
      out << std::setw(8) << t.xi_grid[i];
      for (double v : t.ratios[i]) out << std::setw(8) << (std::isnan(v) ? "NA" : fixed(v, 2));
      out << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return kExitUsage;
    case ErrorKind::FileUnreadable:
    case ErrorKind::NoNumericColumn:
    case ErrorKind::EmptySeries:
    case ErrorKind::DegenerateData:
    case ErrorKind::ConfigInvalid:
      return kExitData;
    case ErrorKind::NonConvergence:
    case ErrorKind::IntegrabilityViolation:
    case ErrorKind::SingularJ:
    case ErrorKind::InfiniteMoment:
      return kExitNumeric;
  }
  return kExitNumeric;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust GEV fitting by minimum density power divergence"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "robgev 0.1.0");

  FitArgs fit;
  auto* s_fit = app.add_subcommand("fit", "Fit ML and MDPD estimators to an annual-maxima file");
  s_fit->add_option("file", fit.file, "Delimited data file")->required();
  s_fit->add_option("--column", fit.column, "Value column (name or 0-based index)");
  s_fit->add_option("--year-column", fit.year_column, "Year column (name or 0-based index)");
  s_fit->add_option("--delimiter", fit.delimiter, "Field separator: a character, 'tab' or 'auto'")
      ->capture_default_str();
  s_fit->add_flag("--no-header", fit.no_header, "The file has no header line");
  s_fit->add_option("--station", fit.station, "Station label (defaults to the file stem)");
  s_fit->add_option("--alpha", fit.alphas, "Alpha values; 0 is maximum likelihood")
      ->delimiter(',')
      ->capture_default_str();
  s_fit->add_option("--drop-below", fit.drop_below,
                    "Also fit ML after removing values below this threshold");
  s_fit->add_option("--restarts", fit.restarts, "Extra optimizer starting points")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  s_fit->add_option("--max-iterations", fit.max_iterations, "Optimizer iteration cap per start")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_fit->add_option("--digits", fit.digits, "Decimals in the human table")
      ->check(CLI::Range(0, 12))
      ->capture_default_str();
  s_fit->add_flag("--strict", fit.strict, "Exit with code 4 if any fit fails to converge");
  add_format(s_fit, fit.format);

  InfluenceArgs infl;
  auto* s_infl = app.add_subcommand("influence", "Influence-function curves over quantile levels (CSV)");
  add_params(s_infl, infl.params);
  s_infl->add_option("--alpha", infl.alphas, "Alpha values")->delimiter(',')->capture_default_str();
  s_infl->add_option("--min-level", infl.min_level, "Smallest distance of a level from 0 or 1")
      ->capture_default_str();
  s_infl->add_option("--per-decade", infl.per_decade, "Grid points per decade near each endpoint")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_infl->add_option("--levels", infl.levels, "Explicit quantile levels (overrides the grid)")->delimiter(',');
  infl.format = Format::Csv;
  add_format(s_infl, infl.format);
  s_infl->get_option("--format")->default_str("csv");

  AsymvarArgs av;
  auto* s_av = app.add_subcommand("asymvar", "Asymptotic variances diag(J^-1 K J^-1) over a shape grid (CSV)");
  s_av->add_option("--mu", av.mu, "Location")->capture_default_str();
  s_av->add_option("--sigma", av.sigma, "Scale")->capture_default_str();
  s_av->add_option("--xi", av.xis, "Explicit shape values")->delimiter(',');
  s_av->add_option("--xi-min", av.xi_min, "Grid start")->capture_default_str();
  s_av->add_option("--xi-max", av.xi_max, "Grid end")->capture_default_str();
  s_av->add_option("--xi-step", av.xi_step, "Grid step")->capture_default_str();
  s_av->add_option("--alpha", av.alphas, "Alpha values")->delimiter(',')->capture_default_str();
  add_format(s_av, av.format);
  s_av->get_option("--format")->default_str("csv");

  SampleArgs smp;
  auto* s_smp = app.add_subcommand("sample", "Draw a seeded GEV sample");
  add_params(s_smp, smp.params);
  s_smp->add_option("-n,--n", smp.n, "Sample size")->check(CLI::PositiveNumber)->capture_default_str();
  s_smp->add_option("--seed", smp.seed, "Generator seed")->capture_default_str();
  add_format(s_smp, smp.format);

  W1Args w1;
  auto* s_w1 = app.add_subcommand("w1", "Wasserstein-1 distance between two GEV laws");
  s_w1->add_option("--mu1", w1.first.mu)->capture_default_str();
  s_w1->add_option("--sigma1", w1.first.sigma)->capture_default_str();
  s_w1->add_option("--xi1", w1.first.xi)->capture_default_str();
  s_w1->add_option("--mu2", w1.second.mu)->capture_default_str();
  s_w1->add_option("--sigma2", w1.second.sigma)->capture_default_str();
  s_w1->add_option("--xi2", w1.second.xi)->capture_default_str();
  s_w1->add_option("--method", w1.method, "quantile or cdf")
      ->check(CLI::IsMember({"quantile", "cdf"}))
      ->capture_default_str();
  add_format(s_w1, w1.format);

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Run the scenarios, sweeps and ratio table of a JSON config");
  s_sim->add_option("config", sim.config, "JSON configuration file")->required();
  s_sim->add_option("-o,--out", sim.out_dir, "Output directory")->capture_default_str();
  s_sim->add_option("--workers", sim.workers, "Worker threads (default: ROBGEV_WORKERS, then all cores)");
  add_format(s_sim, sim.format);

  RatioArgs ratio;
  auto* s_ratio = app.add_subcommand("ratio-table", "ML/MDPD mean-W1 ratios on clean samples");
  s_ratio->add_option("--xi", ratio.xis, "Shape grid")->delimiter(',')->capture_default_str();
  s_ratio->add_option("--alpha", ratio.alphas, "Alpha grid")->delimiter(',')->capture_default_str();
  s_ratio->add_option("-n,--n", ratio.n, "Sample size")->check(CLI::PositiveNumber)->capture_default_str();
  s_ratio->add_option("-d,--replicates", ratio.replicates, "Replicates per shape")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_ratio->add_option("--seed", ratio.seed)->capture_default_str();
  s_ratio->add_option("--workers", ratio.workers, "Worker threads (default: ROBGEV_WORKERS, then all cores)");
  add_format(s_ratio, ratio.format);
  s_ratio->get_option("--format")->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_fit) return cmd_fit(fit, out, err);
    if (*s_infl) return cmd_influence(infl, out, err);
    if (*s_av) return cmd_asymvar(av, out, err);
    if (*s_smp) return cmd_sample(smp, out, err);
    if (*s_w1) return cmd_w1(w1, out, err);
    if (*s_sim) return cmd_simulate(sim, out, err);
    if (*s_ratio) return cmd_ratio(ratio, out, err);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const CLI::ValidationError& e) {
    err << "error[InvalidArgument]: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace robgev::cli
