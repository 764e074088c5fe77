#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "robgev/error.hpp"
#include "robgev/gev.hpp"
#include "robgev/sim_config.hpp"
#include "robgev/simlab.hpp"

using namespace robgev;

namespace {

double ks_statistic(std::vector<double> xs, const GevParams& p) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i], p);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

ContaminationScenario scale_scenario(std::size_t replicates) {
  ContaminationScenario sc;
  sc.id = "scale3";
  sc.epsilon = 0.1;
  sc.base = {0, 1, 0.1};
  sc.contaminant = {0, 3, 0.1};
  sc.n = 100;
  sc.replicates = replicates;
  sc.seed = 11;
  return sc;
}

std::string csv_of(const ReplicationReport& r) {
  std::ostringstream a;
  write_summary_csv(a, {r});
  write_replicates_csv(a, {r});
  return a.str();
}

ErrorKind config_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_simulation_config(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "config accepted: " << text;
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Mixture, CleanScenarioFollowsBase) {
  ContaminationScenario sc;
  sc.base = {0.5, 2.0, 0.2};
  sc.contaminant = {0, 1, -0.3};
  sc.n = 10000;
  // 1% critical value of the one-sample KS statistic, 1.628 / sqrt(n).
  EXPECT_LT(ks_statistic(generate_sample(sc, 3), sc.base), 1.628 / 100.0);
}

TEST(Mixture, FullContaminationFollowsContaminant) {
  ContaminationScenario sc;
  sc.epsilon = 1.0;
  sc.base = {0, 1, 0};
  sc.contaminant = {5, 0.5, -0.4};
  sc.n = 10000;
  const auto xs = generate_sample(sc, 0);
  EXPECT_LT(ks_statistic(xs, sc.contaminant), 1.628 / 100.0);
  for (double x : xs) ASSERT_TRUE(sc.contaminant.support().contains(x));
}

TEST(Mixture, ContaminantFraction) {
  // The contaminant lives above 10, the base below: count which is which.
  ContaminationScenario sc;
  sc.epsilon = 0.1;
  sc.base = {0, 1, -0.5};          // upper endpoint 2
  sc.contaminant = {20, 1, 0.5};  // lower endpoint 18
  sc.n = 100000;
  const auto xs = generate_sample(sc, 1);
  const double k = std::count_if(xs.begin(), xs.end(), [](double x) { return x > 10; });
  const double sd = std::sqrt(sc.n * 0.1 * 0.9);
  EXPECT_NEAR(k, 0.1 * sc.n, 3 * sd);
}

TEST(Mixture, SeedsAreStableAndDistinct) {
  auto sc = scale_scenario(10);
  EXPECT_EQ(generate_sample(sc, 4), generate_sample(sc, 4));
  EXPECT_NE(generate_sample(sc, 4), generate_sample(sc, 5));
  EXPECT_NE(replicate_seed(sc, 0), replicate_seed(sc, 1));
  auto renamed = sc;
  renamed.id = "other";
  EXPECT_EQ(scenario_hash(sc), scenario_hash(renamed));
  auto moved = sc;
  moved.epsilon = 0.2;
  EXPECT_NE(scenario_hash(sc), scenario_hash(moved));
}

TEST(Scenario, Validation) {
  auto sc = scale_scenario(10);
  EXPECT_TRUE(validate(sc).empty());
  sc.contaminant = {0, 3, 0.3};
  EXPECT_EQ(validate(sc).size(), 1u);
  sc.epsilon = 1.5;
  EXPECT_THROW(validate(sc), Error);
  sc = scale_scenario(10);
  sc.n = 0;
  EXPECT_THROW(validate(sc), Error);
  sc = scale_scenario(0);
  EXPECT_THROW(validate(sc), Error);
}

TEST(RunScenario, IdenticalOutputForAnyWorkerCount) {
  const auto sc = scale_scenario(24);
  const std::vector<EstimatorSpec> est{ml_estimator(), mdpd_estimator(0.1)};
  RunOptions one, four;
  one.workers = 1;
  four.workers = 4;
  EXPECT_EQ(csv_of(run_scenario(sc, est, one)), csv_of(run_scenario(sc, est, four)));
}

TEST(RunScenario, Bookkeeping) {
  const auto sc = scale_scenario(40);
  const std::vector<EstimatorSpec> est{ml_estimator(), mdpd_estimator(0.05), mdpd_estimator(0.2)};
  const auto rep = run_scenario(sc, est, {});
  ASSERT_EQ(rep.records.size(), 40u * 3u);
  ASSERT_EQ(rep.summaries.size(), 3u);
  for (std::size_t e = 0; e < est.size(); ++e) {
    const auto& s = rep.summaries[e];
    EXPECT_EQ(s.used + s.failures, sc.replicates);
    double sum = 0.0;
    std::size_t in = 0;
    for (std::size_t r = 0; r < sc.replicates; ++r) {
      const auto& rec = rep.records[r * est.size() + e];
      EXPECT_EQ(rec.replicate, r);
      EXPECT_EQ(rec.estimator, e);
      if (rec.screened_in) {
        ++in;
        sum += rec.w1;
      } else {
        EXPECT_TRUE(std::isnan(rec.w1));
      }
    }
    EXPECT_EQ(in, s.used);
    EXPECT_NEAR(s.mean_w1, sum / in, 1e-12);
  }
}

TEST(RunScenario, LikelihoodDeterioratesUnderScaleContamination) {
  const auto rep = run_scenario(scale_scenario(200), {ml_estimator(), mdpd_estimator(0.2)}, {});
  EXPECT_GT(rep.summaries[0].mean_w1, rep.summaries[1].mean_w1);
}

TEST(RatioTable, CleanCellNearOne) {
  const auto t = ratio_table({0.2}, {0.1}, 100, 200, 7, {});
  EXPECT_NEAR(t.ratios[0][0], 1.00, 0.05);
}

TEST(RatioTable, LargeAlphaLosesEfficiencyForHeavyTails) {
  const auto t = ratio_table({0.8}, {0.8}, 100, 200, 7, {});
  EXPECT_LT(t.ratios[0][0], 0.6);
}

TEST(RatioTable, CleanEnvelope) {
  const auto t = ratio_table({-0.4, -0.2, 0.0, 0.2, 0.4}, {0.05, 0.1}, 100, 200, 3, {});
  for (std::size_t i = 0; i < t.xi_grid.size(); ++i) {
    for (std::size_t j = 0; j < t.alpha_grid.size(); ++j) {
      EXPECT_GE(t.ratios[i][j], 0.85) << t.xi_grid[i] << " " << t.alpha_grid[j];
      EXPECT_LE(t.ratios[i][j], 1.05) << t.xi_grid[i] << " " << t.alpha_grid[j];
    }
  }
  std::ostringstream out;
  write_ratio_csv(out, t);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "xi0,alpha,ratio,ml_mean_w1,mdpd_mean_w1");
}

TEST(Sweeps, GridsAndExpansion) {
  const auto shape = default_sweep_grid(SweepKind::Shape);
  const auto scale = default_sweep_grid(SweepKind::Scale);
  ASSERT_EQ(shape.size(), 26u);
  ASSERT_EQ(scale.size(), 26u);
  EXPECT_DOUBLE_EQ(shape.front(), -1.5);
  EXPECT_DOUBLE_EQ(shape.back(), 0.99);
  EXPECT_DOUBLE_EQ(scale.front(), 0.5);
  EXPECT_DOUBLE_EQ(scale.back(), 3.0);
  SweepSpec s;
  s.base = {0, 1, 0.1};
  s.kind = SweepKind::Scale;
  const auto scenarios = expand(s);
  ASSERT_EQ(scenarios.size(), 26u);
  std::size_t total = 0;
  for (const auto& sc : scenarios) {
    total += sc.replicates;
    EXPECT_EQ(sc.contaminant.mu(), 0.0);
    EXPECT_EQ(sc.contaminant.xi(), 0.1);
  }
  EXPECT_EQ(total, 5200u);
}

TEST(Sweeps, FailureTableCounts) {
  SweepSpec s;
  s.id = "small";
  s.base = {0, 1, 0.1};
  s.replicates = 10;
  s.grid = {-1.5, 0.0, 0.99};
  const auto t = failure_table({s}, {ml_estimator(), mdpd_estimator(0.1)}, {});
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.total, 30u);
    EXPECT_LE(row.failures, row.total);
  }
  std::ostringstream out;
  write_failures_csv(out, t);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "sweep_id,sweep,xi0,estimator,alpha,failures,total");
}

TEST(Config, ParsesFullDocument) {
  const auto cfg = parse_simulation_config(R"({
    "seed": 5, "workers": 2,
    "estimators": [{"name": "ML", "alpha": 0}, {"alpha": 0.1}],
    "fit": {"max_iterations": 500},
    "scenarios": [{"id": "s", "epsilon": 0.1, "n": 50, "replicates": 3,
                   "base": {"mu": 0, "sigma": 1, "xi": 0.1},
                   "contaminant": {"mu": 0, "sigma": 3, "xi": 0.1}}],
    "sweeps": [{"id": "w", "kind": "scale", "base": {"mu": 0, "sigma": 1, "xi": 0}, "grid": [1, 2]}],
    "ratio_table": {"xi_grid": [0], "alpha_grid": [0.1], "replicates": 4}
  })");
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.workers, 2u);
  ASSERT_EQ(cfg.estimators.size(), 2u);
  EXPECT_EQ(cfg.estimators[1].alpha, 0.1);
  EXPECT_EQ(cfg.fit.max_iterations, 500);
  ASSERT_EQ(cfg.scenarios.size(), 1u);
  EXPECT_EQ(cfg.scenarios[0].seed, 5u);
  EXPECT_EQ(cfg.scenarios[0].contaminant.sigma(), 3.0);
  ASSERT_EQ(cfg.sweeps.size(), 1u);
  EXPECT_EQ(cfg.sweeps[0].kind, SweepKind::Scale);
  ASSERT_TRUE(cfg.ratio);
  EXPECT_EQ(cfg.ratio->replicates, 4u);
}

TEST(Config, ErrorsNameTheKeyPath) {
  std::string msg;
  EXPECT_EQ(config_error(R"({"estimators": [{"alpha": 0.1}], "scenarios": [
      {"epsilon": 0.1, "base": {"mu": 0, "sigma": 1, "xi": 0}, "contaminant": {"mu": 0, "sigma": 1, "xi": 0}},
      {"epsilon": 0.1, "base": {"mu": 0, "sigma": -1, "xi": 0}, "contaminant": {"mu": 0, "sigma": 1, "xi": 0}}]})",
                         &msg),
            ErrorKind::ConfigInvalid);
  EXPECT_NE(msg.find("$.scenarios[1].base.sigma"), std::string::npos) << msg;
  EXPECT_EQ(config_error(R"({"estimators": [{"alpha": 0.1}], "bogus": 1})", &msg), ErrorKind::ConfigInvalid);
  EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
  EXPECT_EQ(config_error("{not json"), ErrorKind::ConfigInvalid);
  EXPECT_EQ(config_error(R"({"scenarios": []})"), ErrorKind::ConfigInvalid);
  EXPECT_EQ(config_error(R"({"estimators": [{"alpha": -1}]})"), ErrorKind::ConfigInvalid);
}

TEST(Config, RunIsDeterministic) {
  const auto cfg = parse_simulation_config(R"({"seed": 9,
    "estimators": [{"alpha": 0}, {"alpha": 0.1}],
    "scenarios": [{"id": "s", "epsilon": 0.1, "n": 60, "replicates": 6,
                   "base": {"mu": 0, "sigma": 1, "xi": 0.1},
                   "contaminant": {"mu": 0, "sigma": 3, "xi": 0.1}}]})");
  RunOptions a, b;
  a.workers = 1;
  b.workers = 3;
  const auto ra = run_simulation(cfg, a), rb = run_simulation(cfg, b);
  EXPECT_EQ(csv_of(ra.scenarios.at(0)), csv_of(rb.scenarios.at(0)));
}

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"quick.json", "scale_contamination.json", "shape_contamination.json", "ratio_table.json"}) {
    EXPECT_NO_THROW(load_simulation_config(std::string(ROBGEV_CONFIG_DIR) + "/" + name)) << name;
  }
}
