#pragma once

#include <Eigen/Core>

#include "robgev/detail/kernel.hpp"
#include "robgev/gev.hpp"

namespace robgev {

/// Gradient of log f with respect to (mu, sigma, xi).
struct Score {
  double d_mu = 0.0;
  double d_sigma = 0.0;
  double d_xi = 0.0;

  Eigen::Vector3d as_vector() const { return {d_mu, d_sigma, d_xi}; }
};

/// Observed information -d^2 log f / d(mu, sigma, xi)^2. Symmetric by
/// construction; rows and columns are ordered (mu, sigma, xi).
struct InformationMatrix {
  Eigen::Matrix3d value = Eigen::Matrix3d::Zero();

  double operator()(int i, int j) const { return value(i, j); }
};

/// Closed forms are used for |xi| at or above this cutoff; below it the
/// series-stable chain-rule evaluation takes over, since the closed forms
/// carry 1/xi^4 factors.
inline constexpr double kClosedFormShapeCutoff = 1e-2;

/// Throws Error(InvalidArgument) when x is not strictly inside the support.
Score score(double x, const GevParams& p);
InformationMatrix information(double x, const GevParams& p);

namespace detail {

struct Derivatives {
  Score score;
  InformationMatrix info;
};

/// Both routes evaluated at a standardized point that must be inside the
/// support. `closed_form` evaluates the corrected textbook expressions,
/// `chain_rule` differentiates through the log1p-ratio kernel.
Derivatives closed_form(const StandardPoint& pt, double sigma, double xi) noexcept;
Derivatives chain_rule(const StandardPoint& pt, double sigma, double xi) noexcept;

/// Dispatches on |xi| exactly like score()/information().
Derivatives derivatives(const StandardPoint& pt, double sigma, double xi) noexcept;

}  // namespace detail

}  // namespace robgev
