#include "robgev/gev.hpp"

#include <cmath>
#include <random>
#include <string>

#include "robgev/detail/kernel.hpp"
#include "robgev/error.hpp"

namespace robgev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_gumbel(double xi) noexcept { return std::abs(xi) < kGumbelSwitch; }

// Gumbel-scale variate h for x, or nullopt-like flag when outside support.
bool standard_h(double x, const GevParams& p, double& h) noexcept {
  const double z = (x - p.mu()) / p.sigma();
  if (!std::isfinite(z)) return false;
  if (is_gumbel(p.xi())) {
    // Keep the first-order shape term so the branch does not jump by
    // |xi| * |d f / d xi| at the switch.
    const double u = p.xi() * z;
    h = std::abs(u) < 1e-3 ? z * (1.0 - 0.5 * u) : z;
    return true;
  }
  const auto sp = detail::StandardPoint::from_z(z, p.xi());
  if (!sp.inside) return false;
  h = sp.h;
  return true;
}

}  // namespace

GevParams::GevParams(double mu, double sigma, double xi) : mu_(mu), sigma_(sigma), xi_(xi) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(xi) || !(sigma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "GEV parameters require finite mu, xi and sigma > 0 (got mu=" +
                    std::to_string(mu) + ", sigma=" + std::to_string(sigma) +
                    ", xi=" + std::to_string(xi) + ")");
  }
}

Support GevParams::support() const noexcept {
  Support s;
  if (xi_ == 0.0) return s;
  const double endpoint = mu_ - sigma_ / xi_;
  if (xi_ > 0.0) {
    s.lower = endpoint;
  } else {
    s.upper = endpoint;
  }
  return s;
}

double log_pdf(double x, const GevParams& p) noexcept {
  double h = 0.0;
  if (!standard_h(x, p, h)) return -kInf;
  // exp(-h) may overflow to +inf deep in the left tail; the result is then -inf.
  return -std::log(p.sigma()) - (1.0 + p.xi()) * h - std::exp(-h);
}

double pdf(double x, const GevParams& p) noexcept { return std::exp(log_pdf(x, p)); }

double cdf(double x, const GevParams& p) noexcept {
  if (std::isnan(x)) return x;
  double h = 0.0;
  if (!standard_h(x, p, h)) {
    if (x == kInf || x == -kInf) return x > 0 ? 1.0 : 0.0;
    return p.xi() > 0.0 ? 0.0 : 1.0;
  }
  return std::exp(-std::exp(-h));
}

double standard_quantile_from_gumbel(double h, double xi) noexcept {
  return h * detail::expm1_ratio(xi * h);
}

double quantile(double prob, const GevParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "quantile level must lie in (0, 1), got " + std::to_string(prob));
  }
  const double h = -std::log(-std::log(prob));
  double z = h;
  if (!is_gumbel(p.xi())) {
    z = standard_quantile_from_gumbel(h, p.xi());
  } else if (std::abs(p.xi() * h) < 1e-3) {
    z = h * (1.0 + 0.5 * p.xi() * h);  // inverse of the first-order h(z) above
  }
  return p.mu() + p.sigma() * z;
}

std::vector<double> sample(std::size_t n, const GevParams& p, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(to_unit_open(engine()), p));
  return out;
}

}  // namespace robgev
