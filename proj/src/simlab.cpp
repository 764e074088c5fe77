#include "robgev/simlab.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "robgev/error.hpp"
#include "robgev/metrics.hpp"

namespace robgev {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
}

// Shortest round-trip text; independent of the C locale.
std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

unsigned resolve_workers(unsigned requested, std::size_t jobs) {
  unsigned w = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (jobs < w) w = static_cast<unsigned>(std::max<std::size_t>(1, jobs));
  return w;
}

template <class Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
  workers = resolve_workers(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string alpha_label(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const ContaminationScenario& s) {
  if (!(s.epsilon >= 0.0 && s.epsilon < 1.0) && s.epsilon != 1.0) {
    throw Error(ErrorKind::ConfigInvalid, "epsilon must lie in [0, 1]");
  }
  if (s.n == 0) throw Error(ErrorKind::ConfigInvalid, "n must be at least 1");
  if (s.replicates == 0) throw Error(ErrorKind::ConfigInvalid, "replicates must be at least 1");
  std::vector<std::string> warnings;
  if (s.epsilon > 0.0 && s.contaminant.sigma() != s.base.sigma() &&
      s.contaminant.xi() != s.base.xi()) {
    warnings.push_back("scenario '" + s.id + "': contaminant differs from base in both scale and shape");
  }
  return warnings;
}

std::uint64_t scenario_hash(const ContaminationScenario& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : {s.epsilon, s.base.mu(), s.base.sigma(), s.base.xi(), s.contaminant.mu(),
                   s.contaminant.sigma(), s.contaminant.xi()}) {
    fnv_mix(h, std::bit_cast<std::uint64_t>(v));
  }
  fnv_mix(h, static_cast<std::uint64_t>(s.n));
  return h;
}

std::uint64_t replicate_seed(const ContaminationScenario& s, std::size_t index) noexcept {
  return splitmix64(s.seed ^ splitmix64(scenario_hash(s) ^ splitmix64(index)));
}

std::vector<double> generate_sample(const ContaminationScenario& s, std::size_t index) {
  std::mt19937_64 rng(replicate_seed(s, index));
  std::vector<double> out(s.n);
  for (auto& x : out) {
    const bool contaminated = to_unit_open(rng()) < s.epsilon;
    const double u = to_unit_open(rng());
    x = quantile(u, contaminated ? s.contaminant : s.base);
  }
  return out;
}

EstimatorSpec ml_estimator() { return {"ML", 0.0}; }

EstimatorSpec mdpd_estimator(double alpha) { return {"MDPD_" + alpha_label(alpha), alpha}; }

ReplicationReport run_scenario(const ContaminationScenario& scenario,
                               const std::vector<EstimatorSpec>& estimators,
                               const RunOptions& options) {
  ReplicationReport report;
  report.scenario = scenario;
  report.warnings = validate(scenario);
  const std::size_t ne = estimators.size();
  report.records.resize(scenario.replicates * ne);

  parallel_for(scenario.replicates, options.workers, [&](std::size_t r) {
    const auto data = generate_sample(scenario, r);
    for (std::size_t e = 0; e < ne; ++e) {
      ReplicateRecord& rec = report.records[r * ne + e];
      rec.replicate = r;
      rec.estimator = e;
      rec.w1 = kNaN;
      MdpdConfig cfg = options.fit;
      cfg.alpha = estimators[e].alpha;
      try {
        const FitResult fit = fit_mdpd(data, cfg);
        rec.estimate = fit.params;
        rec.converged = fit.converged;
        if (!fit.converged) {
          rec.note = "not converged";
        } else if (!plausibility_screen(fit, options.screen)) {
          rec.note = "implausible";
        } else if (!(fit.params.xi() < 1.0)) {
          rec.note = "infinite mean";
        } else {
          rec.w1 = wasserstein1(scenario.base, fit.params);
          rec.screened_in = std::isfinite(rec.w1);
          if (!rec.screened_in) rec.note = "w1 not finite";
        }
      } catch (const Error& err) {
        rec.note = std::string(to_string(err.kind())) + ": " + err.what();
      }
    }
  });

  for (std::size_t e = 0; e < ne; ++e) {
    EstimatorSummary s;
    s.estimator = estimators[e];
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t r = 0; r < scenario.replicates; ++r) {
      const auto& rec = report.records[r * ne + e];
      if (rec.screened_in) {
        ++s.used;
        sum += rec.w1;
      } else if (!rec.converged) {
        ++s.non_converged;
      } else {
        ++s.implausible;
      }
    }
    s.failures = scenario.replicates - s.used;
    if (s.used > 0) {
      s.mean_w1 = sum / static_cast<double>(s.used);
      for (std::size_t r = 0; r < scenario.replicates; ++r) {
        const auto& rec = report.records[r * ne + e];
        if (rec.screened_in) sum_sq += (rec.w1 - s.mean_w1) * (rec.w1 - s.mean_w1);
      }
      s.se_w1 = s.used > 1 ? std::sqrt(sum_sq / static_cast<double>(s.used - 1) /
                                       static_cast<double>(s.used))
                           : kNaN;
    } else {
      s.mean_w1 = kNaN;
      s.se_w1 = kNaN;
    }
    report.summaries.push_back(s);
  }
  return report;
}

RatioTable ratio_table(const std::vector<double>& xi_grid, const std::vector<double>& alpha_grid,
                       std::size_t n, std::size_t replicates, std::uint64_t seed,
                       const RunOptions& options) {
  if (xi_grid.empty() || alpha_grid.empty()) {
    throw Error(ErrorKind::ConfigInvalid, "ratio table needs nonempty shape and alpha grids");
  }
  RatioTable table;
  table.xi_grid = xi_grid;
  table.alpha_grid = alpha_grid;
  std::vector<EstimatorSpec> estimators{ml_estimator()};
  for (double a : alpha_grid) {
    if (!(a > 0.0)) throw Error(ErrorKind::ConfigInvalid, "ratio table alphas must be > 0");
    estimators.push_back(mdpd_estimator(a));
  }
  for (double xi : xi_grid) {
    if (!(xi < 1.0)) throw Error(ErrorKind::ConfigInvalid, "ratio table shapes must be < 1");
    ContaminationScenario sc;
    sc.id = "clean_xi_" + alpha_label(xi);
    sc.base = GevParams(0.0, 1.0, xi);
    sc.contaminant = sc.base;
    sc.n = n;
    sc.replicates = replicates;
    sc.seed = seed;
    auto report = run_scenario(sc, estimators, options);
    std::vector<double> row;
    const auto& ml = report.summaries.front();
    for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
      const auto& md = report.summaries[j + 1];
      const bool ok = ml.used > 0 && md.used > 0 && md.mean_w1 > 0.0;
      row.push_back(ok ? ml.mean_w1 / md.mean_w1 : kNaN);
      if (!ok) {
        table.diagnostics.push_back("xi0=" + alpha_label(xi) + " alpha=" + alpha_label(alpha_grid[j]) +
                                    ": no usable fits");
      }
    }
    table.ratios.push_back(std::move(row));
    table.reports.push_back(std::move(report));
  }
  return table;
}

std::vector<double> default_sweep_grid(SweepKind kind) {
  std::vector<double> grid;
  if (kind == SweepKind::Shape) {
    for (int k = -15; k <= 9; ++k) grid.push_back(k / 10.0);
    grid.push_back(0.99);
  } else {
    for (int k = 5; k <= 30; ++k) grid.push_back(k / 10.0);
  }
  return grid;
}

std::vector<ContaminationScenario> expand(const SweepSpec& sweep) {
  const auto grid = sweep.grid.empty() ? default_sweep_grid(sweep.kind) : sweep.grid;
  std::vector<ContaminationScenario> out;
  for (double g : grid) {
    ContaminationScenario sc;
    sc.id = sweep.id + (sweep.kind == SweepKind::Shape ? "_xi1_" : "_sigma1_") + alpha_label(g);
    sc.epsilon = sweep.epsilon;
    sc.base = sweep.base;
    sc.contaminant = sweep.kind == SweepKind::Shape
                         ? GevParams(sweep.base.mu(), sweep.base.sigma(), g)
                         : GevParams(sweep.base.mu(), g, sweep.base.xi());
    sc.n = sweep.n;
    sc.replicates = sweep.replicates;
    sc.seed = sweep.seed;
    out.push_back(std::move(sc));
  }
  return out;
}

FailureTable failure_table(const std::vector<SweepSpec>& sweeps,
                           const std::vector<EstimatorSpec>& estimators,
                           const RunOptions& options) {
  FailureTable table;
  for (const auto& sweep : sweeps) {
    std::vector<FailureRow> rows;
    for (const auto& e : estimators) rows.push_back({sweep.id, sweep.kind, sweep.base.xi(), e, 0, 0});
    for (const auto& sc : expand(sweep)) {
      auto report = run_scenario(sc, estimators, options);
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        rows[e].failures += report.summaries[e].failures;
        rows[e].total += sc.replicates;
      }
      table.reports.push_back(std::move(report));
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  return table;
}

std::string to_string(SweepKind kind) { return kind == SweepKind::Shape ? "shape" : "scale"; }

void write_summary_csv(std::ostream& out, const std::vector<ReplicationReport>& reports) {
  out << "scenario_id,epsilon,mu0,sigma0,xi0,mu1,sigma1,xi1,n,replicates,"
         "estimator,alpha,mean_w1,se_w1,used,failures,non_converged,implausible\n";
  for (const auto& rep : reports) {
    const auto& sc = rep.scenario;
    for (const auto& s : rep.summaries) {
      out << csv_field(sc.id) << ',' << num(sc.epsilon) << ',' << num(sc.base.mu()) << ','
          << num(sc.base.sigma()) << ',' << num(sc.base.xi()) << ',' << num(sc.contaminant.mu()) << ','
          << num(sc.contaminant.sigma()) << ',' << num(sc.contaminant.xi()) << ',' << sc.n << ','
          << sc.replicates << ',' << csv_field(s.estimator.name) << ',' << num(s.estimator.alpha) << ','
          << num(s.mean_w1) << ',' << num(s.se_w1) << ',' << s.used << ',' << s.failures << ','
          << s.non_converged << ',' << s.implausible << '\n';
    }
  }
}

void write_replicates_csv(std::ostream& out, const std::vector<ReplicationReport>& reports) {
  out << "scenario_id,replicate,estimator,alpha,mu_hat,sigma_hat,xi_hat,converged,screened_in,w1,note\n";
  for (const auto& rep : reports) {
    for (const auto& rec : rep.records) {
      const auto& est = rep.summaries[rec.estimator].estimator;
      out << csv_field(rep.scenario.id) << ',' << rec.replicate << ',' << csv_field(est.name) << ','
          << num(est.alpha) << ',' << num(rec.estimate.mu()) << ',' << num(rec.estimate.sigma()) << ','
          << num(rec.estimate.xi()) << ',' << (rec.converged ? 1 : 0) << ','
          << (rec.screened_in ? 1 : 0) << ',' << num(rec.w1) << ',' << csv_field(rec.note) << '\n';
    }
  }
}

void write_failures_csv(std::ostream& out, const FailureTable& table) {
  out << "sweep_id,sweep,xi0,estimator,alpha,failures,total\n";
  for (const auto& r : table.rows) {
    out << csv_field(r.sweep_id) << ',' << to_string(r.kind) << ',' << num(r.xi0) << ','
        << csv_field(r.estimator.name) << ',' << num(r.estimator.alpha) << ',' << r.failures << ','
        << r.total << '\n';
  }
}

void write_ratio_csv(std::ostream& out, const RatioTable& table) {
  out << "xi0,alpha,ratio,ml_mean_w1,mdpd_mean_w1\n";
  for (std::size_t i = 0; i < table.xi_grid.size(); ++i) {
    const auto& sums = table.reports[i].summaries;
    for (std::size_t j = 0; j < table.alpha_grid.size(); ++j) {
      out << num(table.xi_grid[i]) << ',' << num(table.alpha_grid[j]) << ','
          << num(table.ratios[i][j]) << ',' << num(sums[0].mean_w1) << ','
          << num(sums[j + 1].mean_w1) << '\n';
    }
  }
}

}  // namespace robgev
