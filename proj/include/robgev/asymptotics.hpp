#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "robgev/gev.hpp"
#include "robgev/mdpd.hpp"

namespace robgev {

struct AsymptoticsOptions {
  double quad_tolerance = 1e-11;
  /// Refuse covariances when cond(J) exceeds this cap (Error SingularJ).
  double condition_cap = 1e12;
};

/// U, J, K and the sandwich covariance J^-1 K J^-1 at (params, alpha).
struct SandwichCovariance {
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
  Eigen::Vector3d U = Eigen::Vector3d::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double alpha = 0.0;
  GevParams params;
  /// Quadrature value of U before alpha = 0 zeroes it analytically.
  Eigen::Vector3d u_quadrature = Eigen::Vector3d::Zero();
  double j_condition = 0.0;
  double quad_error = 0.0;
};

/// -(1 + alpha) / (2 + alpha): the shape must exceed this for the sandwich
/// covariance to exist.
double integrability_bound(double alpha) noexcept;

/// Throws Error(IntegrabilityViolation) outside the region,
/// Error(SingularJ) when J is too ill-conditioned.
SandwichCovariance compute_ujk(const GevParams& params, double alpha,
                               const AsymptoticsOptions& options = {});

/// Integrals of S f^{1+alpha}, S S^T f^{1+alpha}, S S^T f^{1+2 alpha} over the
/// support, without the region check. Exposed for diagnostics and tests.
struct RawIntegrals {
  Eigen::Vector3d s_f1a = Eigen::Vector3d::Zero();
  Eigen::Matrix3d ss_f1a = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d ss_f12a = Eigen::Matrix3d::Zero();
  double error = 0.0;
};
RawIntegrals score_integrals(const GevParams& params, double alpha, double tolerance = 1e-11);

/// Plug-in standard errors sqrt(diag(cov) / n) at the fitted parameters.
std::array<double, 3> standard_errors(const FitResult& fit, std::size_t n,
                                      const AsymptoticsOptions& options = {});
std::array<double, 3> standard_errors(const SandwichCovariance& sc, std::size_t n);

/// Fills fit.covariance (cov / n) and fit.std_errors.
void attach_covariance(FitResult& fit, std::size_t n, const AsymptoticsOptions& options = {});

/// Influence function J^-1 (S(x) f^alpha(x) - U) at an x strictly inside
/// the support.
Eigen::Vector3d influence(double x, const SandwichCovariance& sc);
Eigen::Vector3d influence(double x, const GevParams& params, double alpha);

/// Influence at the quantile level `level` in (0, 1). Evaluated through the
/// Gumbel-scale variate so levels very close to 0 or 1 stay accurate.
Eigen::Vector3d influence_at_level(double level, const SandwichCovariance& sc);

/// Quantile levels spaced geometrically toward both endpoints:
/// {min_level, ..., 0.5, ..., 1 - min_level} with `per_decade` points per
/// decade of distance from the nearer endpoint.
std::vector<double> geometric_level_grid(double min_level, int per_decade);

}  // namespace robgev
