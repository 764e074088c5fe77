#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "robgev/gev.hpp"

namespace robgev {

struct MdpdConfig {
  /// Divergence tuning parameter; 0 selects maximum likelihood.
  double alpha = 0.1;
  /// Feasible shapes are xi > -(1 + alpha) / alpha + xi_lower_margin.
  double xi_lower_margin = 1e-6;
  int max_iterations = 2000;
  double tolerance = 1e-8;
  /// Extra deterministic starting points beyond the PWM start.
  int restarts = 1;
  /// Lower shape bound for the likelihood path; the likelihood is unbounded
  /// above once xi < -1.
  double ml_xi_floor = -1.0;
};

struct FitResult {
  GevParams params;
  double alpha = 0.0;
  double objective_value = 0.0;
  bool converged = false;
  int n_evaluations = 0;
  std::optional<Eigen::Matrix3d> covariance;
  std::optional<std::array<double, 3>> std_errors;
  std::vector<std::string> messages;
};

/// Empirical MDPD criterion. The model-integral term uses the Gamma-function
/// closed form; observations outside the support contribute f^alpha = 0.
/// Throws Error(InvalidArgument) when alpha <= 0, xi <= -(1 + alpha) / alpha
/// or data is empty.
double mdpd_objective(const GevParams& p, std::span<const double> data, double alpha);

/// The closed-form term sigma^-alpha (1 + alpha)^-(alpha (xi + 1) + 1)
/// Gamma(alpha (xi + 1) + 1), i.e. the integral of f^{1 + alpha}.
double power_integral(const GevParams& p, double alpha);

/// -(1/n) sum log f(X_i); +inf as soon as one observation leaves the support.
double negative_log_likelihood(const GevParams& p, std::span<const double> data);

/// Hosking's probability-weighted-moment estimate, clamped to a shape range
/// where it is well defined. Falls back to Gumbel moments when degenerate.
GevParams pwm_estimate(std::span<const double> data);

/// Minimizes the MDPD criterion (alpha > 0) or delegates to fit_ml (alpha = 0).
/// Throws Error(DegenerateData) when all observations are equal.
FitResult fit_mdpd(std::span<const double> data, const MdpdConfig& config);

/// Maximum likelihood with the same reparameterization and multi-start
/// schedule as fit_mdpd.
FitResult fit_ml(std::span<const double> data, const MdpdConfig& config);

struct ScreenBounds {
  double mu_min = -2.0;
  double mu_max = 2.0;
  double sigma_max = 2.0;
};

/// True iff the fit converged and its location/scale are plausible for a
/// standardized (mu0 = 0, sigma0 = 1) experiment.
bool plausibility_screen(const FitResult& result, const ScreenBounds& bounds = {});

}  // namespace robgev
