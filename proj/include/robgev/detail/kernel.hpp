#pragma once

// Shared standardized intermediates of the GEV log-density.
//
// With z = (x - mu) / sigma, u = xi z and t = 1 + u, the log-density is
//   log f = -log sigma - (1 + xi) h - e^{-h},   h = log(t) / xi = z phi(u),
// where phi(u) = log1p(u) / u. Writing everything through phi and its first
// two derivatives keeps the xi -> 0 limit exact (phi(0) = 1, phi'(0) = -1/2,
// phi''(0) = 2/3) instead of dividing by powers of xi.

#include <cmath>

namespace robgev::detail {

inline double log1p_ratio(double u) noexcept {
  return u == 0.0 ? 1.0 : std::log1p(u) / u;
}

inline double log1p_ratio_d1(double u) noexcept {
  if (std::abs(u) < 0.1) {
    double sum = 0.0;
    double power = 1.0;
    for (int j = 0; j < 24; ++j) {
      const double term = static_cast<double>(j + 1) / static_cast<double>(j + 2) * power;
      sum += (j % 2 == 0) ? -term : term;
      power *= u;
    }
    return sum;
  }
  return (u / (1.0 + u) - std::log1p(u)) / (u * u);
}

inline double log1p_ratio_d2(double u) noexcept {
  if (std::abs(u) < 0.1) {
    double sum = 0.0;
    double power = 1.0;
    for (int j = 0; j < 24; ++j) {
      const double term =
          static_cast<double>((j + 2) * (j + 1)) / static_cast<double>(j + 3) * power;
      sum += (j % 2 == 0) ? term : -term;
      power *= u;
    }
    return sum;
  }
  const double t = 1.0 + u;
  return -1.0 / (u * t * t) - 2.0 / (u * u * t) + 2.0 * std::log1p(u) / (u * u * u);
}

/// expm1(v) / v with the removable singularity filled in.
inline double expm1_ratio(double v) noexcept {
  return v == 0.0 ? 1.0 : std::expm1(v) / v;
}

/// A point of the support in standardized coordinates. `inside` is false
/// when t <= 0; the remaining fields are then meaningless.
struct StandardPoint {
  double z = 0.0;
  double u = 0.0;  // xi * z
  double t = 1.0;  // 1 + xi * z
  double h = 0.0;  // Gumbel-scale variate, log(t) / xi
  bool inside = true;

  static StandardPoint from_z(double z, double xi) noexcept {
    StandardPoint p;
    p.z = z;
    p.u = xi * z;
    p.t = 1.0 + p.u;
    if (!(p.t > 0.0) || !std::isfinite(z)) {
      p.inside = false;
      return p;
    }
    p.h = z * log1p_ratio(p.u);
    return p;
  }

  /// Exact construction from h; avoids recomputing t from z near a finite
  /// endpoint where 1 + xi z cancels.
  static StandardPoint from_h(double h, double xi) noexcept {
    StandardPoint p;
    p.h = h;
    const double v = xi * h;
    p.u = std::expm1(v);
    p.t = std::exp(v);
    p.z = h * expm1_ratio(v);
    p.inside = std::isfinite(p.z) && p.t > 0.0;
    return p;
  }
};

}  // namespace robgev::detail
