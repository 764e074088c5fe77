#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robgev/simlab.hpp"

namespace robgev {

struct RatioSpec {
  std::vector<double> xi_grid;
  std::vector<double> alpha_grid;
  std::size_t n = 100;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
};

/// Declarative description of a simulation run, read from JSON:
///
///   {
///     "seed": 20240501,
///     "workers": 0,
///     "estimators": [{"name": "ML", "alpha": 0}, {"alpha": 0.1}],
///     "fit": {"max_iterations": 2000, "tolerance": 1e-8, "restarts": 1},
///     "screen": {"mu_min": -2, "mu_max": 2, "sigma_max": 2},
///     "scenarios": [{"id": "s1", "epsilon": 0.1, "n": 100, "replicates": 200,
///                    "base": {"mu": 0, "sigma": 1, "xi": 0.1},
///                    "contaminant": {"mu": 0, "sigma": 3, "xi": 0.1}}],
///     "sweeps": [{"id": "xi0_0.1", "kind": "shape", "epsilon": 0.1,
///                 "base": {"mu": 0, "sigma": 1, "xi": 0.1}, "grid": [...]}],
///     "ratio_table": {"xi_grid": [...], "alpha_grid": [...], "n": 100, "replicates": 200}
///   }
///
/// Every section except "estimators" is optional; per-item "seed" overrides
/// the top-level one. Errors are Error(ConfigInvalid) and name the offending
/// key path, e.g. "$.scenarios[1].base.sigma".
struct SimulationConfig {
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<EstimatorSpec> estimators;
  MdpdConfig fit;
  ScreenBounds screen;
  std::vector<ContaminationScenario> scenarios;
  std::vector<SweepSpec> sweeps;
  std::optional<RatioSpec> ratio;
};

SimulationConfig parse_simulation_config(const std::string& json_text);
/// Throws Error(FileUnreadable) when the file cannot be read.
SimulationConfig load_simulation_config(const std::string& path);

struct SimulationOutput {
  std::vector<ReplicationReport> scenarios;
  std::optional<FailureTable> failures;
  std::optional<RatioTable> ratio;
  std::vector<std::string> warnings;
};

SimulationOutput run_simulation(const SimulationConfig& config, const RunOptions& options);

/// Writes summary.csv and replicates.csv (scenarios and sweeps together),
/// failures.csv when sweeps ran and ratio_table.csv when requested.
/// Returns the paths written.
std::vector<std::string> write_simulation_outputs(const std::string& directory,
                                                  const SimulationOutput& output);

}  // namespace robgev
