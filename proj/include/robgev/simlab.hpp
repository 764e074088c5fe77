#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "robgev/gev.hpp"
#include "robgev/mdpd.hpp"

namespace robgev {

/// Mixture (1 - epsilon) GEV(base) + epsilon GEV(contaminant).
struct ContaminationScenario {
  std::string id;
  double epsilon = 0.0;
  GevParams base;
  GevParams contaminant;
  std::size_t n = 100;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
};

/// Throws Error(ConfigInvalid) on bad values. Returns warnings, e.g. when
/// the contaminant differs from the base in both scale and shape.
std::vector<std::string> validate(const ContaminationScenario& scenario);

/// Stable 64-bit digest of the scenario's numeric fields (id excluded).
std::uint64_t scenario_hash(const ContaminationScenario& scenario) noexcept;

/// Seed of replicate `index`, derived from (seed, scenario hash, index).
std::uint64_t replicate_seed(const ContaminationScenario& scenario, std::size_t index) noexcept;

/// Sample of replicate `index`: each draw comes from the contaminant with
/// probability epsilon. Deterministic given (scenario, index).
std::vector<double> generate_sample(const ContaminationScenario& scenario, std::size_t index);

/// alpha = 0 means maximum likelihood.
struct EstimatorSpec {
  std::string name;
  double alpha = 0.0;
};

EstimatorSpec ml_estimator();
EstimatorSpec mdpd_estimator(double alpha);

struct ReplicateRecord {
  std::size_t replicate = 0;
  std::size_t estimator = 0;
  GevParams estimate;
  bool converged = false;
  /// Converged, passed the screen and has a finite-mean fitted law.
  bool screened_in = false;
  /// W1 between the base law and the fitted law; NaN when screened out.
  double w1 = 0.0;
  std::string note;
};

struct EstimatorSummary {
  EstimatorSpec estimator;
  double mean_w1 = 0.0;
  double se_w1 = 0.0;
  std::size_t used = 0;
  std::size_t failures = 0;
  std::size_t non_converged = 0;
  std::size_t implausible = 0;
};

struct ReplicationReport {
  ContaminationScenario scenario;
  std::vector<EstimatorSummary> summaries;
  /// Replicate-major: records[r * estimators + e].
  std::vector<ReplicateRecord> records;
  std::vector<std::string> warnings;
};

struct RunOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Optimizer settings; alpha is overridden per estimator.
  MdpdConfig fit;
  ScreenBounds screen;
};

/// Fits every estimator to the same sample of each replicate (paired
/// comparison), screens, and scores each fit by W1 against the base law.
/// Per-replicate failures are recorded, never thrown. Output does not depend
/// on the worker count.
ReplicationReport run_scenario(const ContaminationScenario& scenario,
                               const std::vector<EstimatorSpec>& estimators,
                               const RunOptions& options = {});

struct RatioTable {
  std::vector<double> xi_grid;
  std::vector<double> alpha_grid;
  /// ratios[i][j] = mean W1(ML) / mean W1(MDPD alpha_j) at xi_grid[i];
  /// NaN for cells without usable fits.
  std::vector<std::vector<double>> ratios;
  std::vector<ReplicationReport> reports;
  std::vector<std::string> diagnostics;
};

/// Clean GEV(0, 1, xi) samples, one scenario per grid value.
RatioTable ratio_table(const std::vector<double>& xi_grid, const std::vector<double>& alpha_grid,
                       std::size_t n, std::size_t replicates, std::uint64_t seed,
                       const RunOptions& options = {});

enum class SweepKind { Shape, Scale };

/// Contaminant grid: shape -1.5, -1.4, ..., 0.9, 0.99 or scale 0.5, 0.6, ..., 3.
std::vector<double> default_sweep_grid(SweepKind kind);

struct SweepSpec {
  std::string id;
  SweepKind kind = SweepKind::Shape;
  GevParams base{0.0, 1.0, 0.0};
  double epsilon = 0.1;
  std::size_t n = 100;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  /// Empty means default_sweep_grid(kind).
  std::vector<double> grid;
};

/// Scenarios of a sweep: only the swept parameter of the contaminant differs
/// from the base.
std::vector<ContaminationScenario> expand(const SweepSpec& sweep);

struct FailureRow {
  std::string sweep_id;
  SweepKind kind = SweepKind::Shape;
  double xi0 = 0.0;
  EstimatorSpec estimator;
  std::size_t failures = 0;
  std::size_t total = 0;
};

struct FailureTable {
  std::vector<FailureRow> rows;
  std::vector<ReplicationReport> reports;
};

FailureTable failure_table(const std::vector<SweepSpec>& sweeps,
                           const std::vector<EstimatorSpec>& estimators,
                           const RunOptions& options = {});

/// CSV writers. Columns, in order:
/// summary:    scenario_id,epsilon,mu0,sigma0,xi0,mu1,sigma1,xi1,n,replicates,
///             estimator,alpha,mean_w1,se_w1,used,failures,non_converged,implausible
/// replicates: scenario_id,replicate,estimator,alpha,mu_hat,sigma_hat,xi_hat,
///             converged,screened_in,w1,note
/// failures:   sweep_id,sweep,xi0,estimator,alpha,failures,total
/// ratio:      xi0,alpha,ratio,ml_mean_w1,mdpd_mean_w1
void write_summary_csv(std::ostream& out, const std::vector<ReplicationReport>& reports);
void write_replicates_csv(std::ostream& out, const std::vector<ReplicationReport>& reports);
void write_failures_csv(std::ostream& out, const FailureTable& table);
void write_ratio_csv(std::ostream& out, const RatioTable& table);

std::string to_string(SweepKind kind);

}  // namespace robgev
