#include "robgev/calculus.hpp"

#include <cmath>
#include <string>

#include "robgev/error.hpp"

namespace robgev {

namespace detail {

namespace {

void fill_symmetric(InformationMatrix& m, double mm, double ms, double mx, double ss, double sx,
                    double xx) {
  m.value << mm, ms, mx,
             ms, ss, sx,
             mx, sx, xx;
}

}  // namespace

Derivatives closed_form(const StandardPoint& pt, double sigma, double xi) noexcept {
  const double z = pt.z;
  const double t = pt.t;
  const double w = std::exp(-pt.h);  // t^{-1/xi}
  const double L = xi * pt.h;        // log t
  const double a = xi + 1.0 - w;
  const double s2 = sigma * sigma;
  const double t2 = t * t;
  const double xi2 = xi * xi;

  Derivatives d;
  d.score.d_mu = a / (sigma * t);
  d.score.d_sigma = -1.0 / sigma + z * a / (sigma * t);
  d.score.d_xi = L / xi2 * (1.0 - w) - z * a / (xi * t);

  const double mm = (1.0 + xi) * (w - xi) / (s2 * t2);
  const double ms = (1.0 + xi + (z - 1.0) * w) / (s2 * t2);
  const double cross = t * L - xi * (1.0 + xi) * z;
  const double mx = (z - 1.0) / (sigma * t2) + w / (sigma * xi2 * t2) * cross;
  const double ss = (z * w * ((1.0 - xi) * z - 2.0) + xi * z * z + 2.0 * z - 1.0) / (s2 * t2);
  const double sx = z * (z - 1.0) / (sigma * t2) + z * w / (xi2 * sigma * t2) * cross;
  const double xx = -z * z / t2 + z * z / (xi * t2) * (w - 1.0) +
                    2.0 * z / (xi2 * t) * (w - 1.0) + w * z * z / (xi2 * t2) +
                    2.0 * L / (xi2 * xi) * (1.0 - w - w * z / t) +
                    w * L * L / (xi2 * xi2);
  fill_symmetric(d.info, mm, ms, mx, ss, sx, xx);
  return d;
}

Derivatives chain_rule(const StandardPoint& pt, double sigma, double xi) noexcept {
  const double z = pt.z;
  const double t = pt.t;
  const double h = pt.h;
  const double w = std::exp(-h);
  const double a = 1.0 + xi - w;

  // Partials of h(xi, z) = z * phi(xi z).
  const double h_z = 1.0 / t;
  const double h_zz = -xi / (t * t);
  const double h_zx = -z / (t * t);
  const double h_x = z * z * log1p_ratio_d1(pt.u);
  const double h_xx = z * z * z * log1p_ratio_d2(pt.u);

  // Partials of G(xi, z) = -(1 + xi) h - e^{-h}.
  const double g_z = -h_z * a;
  const double g_x = -h - h_x * a;
  const double g_zz = -(h_zz * a + w * h_z * h_z);
  const double g_zx = -(h_zx * a + h_z * (1.0 + w * h_x));
  const double g_xx = -h_x - h_xx * a - h_x * (1.0 + w * h_x);

  const double s2 = sigma * sigma;
  Derivatives d;
  d.score.d_mu = -g_z / sigma;
  d.score.d_sigma = -(1.0 + z * g_z) / sigma;
  d.score.d_xi = g_x;
  fill_symmetric(d.info,
                 -g_zz / s2,
                 -(z * g_zz + g_z) / s2,
                 g_zx / sigma,
                 -(1.0 + z * z * g_zz + 2.0 * z * g_z) / s2,
                 z * g_zx / sigma,
                 -g_xx);
  return d;
}

Derivatives derivatives(const StandardPoint& pt, double sigma, double xi) noexcept {
  return std::abs(xi) >= kClosedFormShapeCutoff ? closed_form(pt, sigma, xi)
                                                 : chain_rule(pt, sigma, xi);
}

}  // namespace detail

namespace {

detail::StandardPoint checked_point(double x, const GevParams& p) {
  const auto pt = detail::StandardPoint::from_z((x - p.mu()) / p.sigma(), p.xi());
  if (!pt.inside) {
    throw Error(ErrorKind::InvalidArgument,
                "score/information evaluated outside the open support at x=" + std::to_string(x));
  }
  return pt;
}

}  // namespace

Score score(double x, const GevParams& p) {
  return detail::derivatives(checked_point(x, p), p.sigma(), p.xi()).score;
}

InformationMatrix information(double x, const GevParams& p) {
  return detail::derivatives(checked_point(x, p), p.sigma(), p.xi()).info;
}

}  // namespace robgev
