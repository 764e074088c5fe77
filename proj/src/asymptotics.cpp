#include "robgev/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "robgev/calculus.hpp"
#include "robgev/error.hpp"
#include "robgev/quadrature.hpp"

namespace robgev {

namespace {

constexpr std::size_t kComponents = 15;  // U (3), J upper triangle (6), K upper triangle (6)
constexpr std::array<std::pair<int, int>, 6> kUpper = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

// Every integral is taken in the Gumbel-scale variate h = -log(-log F(x)),
// for which dF = exp(-h - e^{-h}) dh. Both the infinite tail and the
// neighbourhood of a finite endpoint map to |h| -> inf with exponential decay.
std::array<double, kComponents> integrand(double h, const GevParams& p, double alpha) {
  std::array<double, kComponents> v{};
  const double w = std::exp(-h);
  const double log_dF = -h - w;
  if (!(log_dF > -740.0)) return v;
  const auto pt = detail::StandardPoint::from_h(h, p.xi());
  if (!pt.inside) return v;
  const double log_f = -std::log(p.sigma()) - (1.0 + p.xi()) * h - w;
  // Square roots of the weights: near a finite endpoint S grows like
  // e^{-xi h} and S S^T alone would overflow long before the weighted
  // product does.
  const double root_j = std::exp(0.5 * (alpha * log_f + log_dF));
  const double root_k = std::exp(0.5 * (2.0 * alpha * log_f + log_dF));
  if (root_j == 0.0 && root_k == 0.0) return v;
  const Eigen::Vector3d s = detail::derivatives(pt, p.sigma(), p.xi()).score.as_vector();
  const Eigen::Vector3d sj = s * root_j;
  const Eigen::Vector3d sk = s * root_k;
  for (int i = 0; i < 3; ++i) v[i] = sj[i] * root_j;
  for (std::size_t k = 0; k < kUpper.size(); ++k) {
    v[3 + k] = sj[kUpper[k].first] * sj[kUpper[k].second];
    v[9 + k] = sk[kUpper[k].first] * sk[kUpper[k].second];
  }
  return v;
}

// Exponential decay rates in h of the U, J and K integrands toward a finite
// upper endpoint (xi < 0), where S ~ e^{-xi h} and f^a dF ~ e^{-(1 + a(1 + xi)) h}.
std::array<double, kComponents> tail_rates(double xi, double alpha) {
  std::array<double, kComponents> r{};
  const double grow = -xi;
  for (std::size_t k = 0; k < 3; ++k) r[k] = 1.0 + alpha * (1.0 + xi) - grow;
  for (std::size_t k = 3; k < 9; ++k) r[k] = 1.0 + alpha * (1.0 + xi) - 2.0 * grow;
  for (std::size_t k = 9; k < 15; ++k) r[k] = 1.0 + 2.0 * alpha * (1.0 + xi) - 2.0 * grow;
  return r;
}

Eigen::Matrix3d symmetric_from(const std::array<double, kComponents>& v, std::size_t offset) {
  Eigen::Matrix3d m;
  for (std::size_t k = 0; k < kUpper.size(); ++k) {
    m(kUpper[k].first, kUpper[k].second) = v[offset + k];
    m(kUpper[k].second, kUpper[k].first) = v[offset + k];
  }
  return m;
}

}  // namespace

double integrability_bound(double alpha) noexcept { return -(1.0 + alpha) / (2.0 + alpha); }

RawIntegrals score_integrals(const GevParams& params, double alpha, double tolerance) {
  quad::Options opt;
  opt.abs_tolerance = tolerance;
  opt.rel_tolerance = tolerance;
  auto f = [&](double h) { return integrand(h, params, alpha); };
  const auto lower = quad::integrate_from_minus_infinity<kComponents>(f, 0.0, opt);
  quad::Result<kComponents> upper;
  if (params.xi() < 0.0) {
    // Finite upper endpoint: integrate while e^{xi h} is representable and
    // add the remaining exponential tail in closed form.
    const double cut = std::max(50.0, 600.0 / -params.xi());
    const auto near = quad::integrate<kComponents>(f, 0.0, 50.0, opt);
    const auto far = quad::integrate<kComponents>(f, 50.0, cut, opt);
    const auto at_cut = f(cut);
    const auto rates = tail_rates(params.xi(), alpha);
    upper.error = near.error + far.error;
    for (std::size_t k = 0; k < kComponents; ++k) {
      const double tail = rates[k] > 0.0 ? at_cut[k] / rates[k] : std::numeric_limits<double>::infinity();
      upper.value[k] = near.value[k] + far.value[k] + tail;
      upper.error += std::abs(tail) * 1e-3;
    }
  } else {
    upper = quad::integrate_to_infinity<kComponents>(f, 0.0, opt);
  }
  std::array<double, kComponents> total{};
  for (std::size_t k = 0; k < kComponents; ++k) total[k] = upper.value[k] + lower.value[k];
  RawIntegrals r;
  r.s_f1a = Eigen::Vector3d(total[0], total[1], total[2]);
  r.ss_f1a = symmetric_from(total, 3);
  r.ss_f12a = symmetric_from(total, 9);
  r.error = upper.error + lower.error;
  return r;
}

SandwichCovariance compute_ujk(const GevParams& params, double alpha,
                               const AsymptoticsOptions& options) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must be finite and >= 0");
  }
  if (!(params.xi() > integrability_bound(alpha))) {
    throw Error(ErrorKind::IntegrabilityViolation,
                "shape " + std::to_string(params.xi()) + " <= -(1+alpha)/(2+alpha) = " +
                    std::to_string(integrability_bound(alpha)) + " at alpha=" +
                    std::to_string(alpha));
  }
  const RawIntegrals raw = score_integrals(params, alpha, options.quad_tolerance);

  SandwichCovariance sc;
  sc.params = params;
  sc.alpha = alpha;
  sc.quad_error = raw.error;
  sc.u_quadrature = raw.s_f1a;
  sc.U = alpha == 0.0 ? Eigen::Vector3d::Zero() : raw.s_f1a;
  sc.J = raw.ss_f1a;
  sc.K = raw.ss_f12a - sc.U * sc.U.transpose();

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sc.J, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  sc.j_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(sc.j_condition <= options.condition_cap)) {
    throw Error(ErrorKind::SingularJ, "J is ill-conditioned (cond = " +
                                          std::to_string(sc.j_condition) + ")");
  }
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(sc.J);
  const Eigen::Matrix3d jinv_k = ldlt.solve(sc.K);
  const Eigen::Matrix3d cov = ldlt.solve(jinv_k.transpose());
  sc.cov = 0.5 * (cov + cov.transpose());
  return sc;
}

std::array<double, 3> standard_errors(const SandwichCovariance& sc, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "standard errors need n >= 1");
  const double nd = static_cast<double>(n);
  return {std::sqrt(sc.cov(0, 0) / nd), std::sqrt(sc.cov(1, 1) / nd),
          std::sqrt(sc.cov(2, 2) / nd)};
}

std::array<double, 3> standard_errors(const FitResult& fit, std::size_t n,
                                      const AsymptoticsOptions& options) {
  return standard_errors(compute_ujk(fit.params, fit.alpha, options), n);
}

void attach_covariance(FitResult& fit, std::size_t n, const AsymptoticsOptions& options) {
  const auto sc = compute_ujk(fit.params, fit.alpha, options);
  fit.covariance = sc.cov / static_cast<double>(n);
  fit.std_errors = standard_errors(sc, n);
}

namespace {

Eigen::Vector3d influence_at_point(const detail::StandardPoint& pt, const SandwichCovariance& sc) {
  const auto& p = sc.params;
  if (!pt.inside) {
    throw Error(ErrorKind::InvalidArgument, "influence evaluated outside the open support");
  }
  const double log_f = -std::log(p.sigma()) - (1.0 + p.xi()) * pt.h - std::exp(-pt.h);
  const double f_alpha = sc.alpha == 0.0 ? 1.0 : std::exp(sc.alpha * log_f);
  const Eigen::Vector3d s = detail::derivatives(pt, p.sigma(), p.xi()).score.as_vector();
  return sc.J.ldlt().solve(s * f_alpha - sc.U);
}

}  // namespace

Eigen::Vector3d influence(double x, const SandwichCovariance& sc) {
  const auto& p = sc.params;
  return influence_at_point(detail::StandardPoint::from_z((x - p.mu()) / p.sigma(), p.xi()), sc);
}

Eigen::Vector3d influence(double x, const GevParams& params, double alpha) {
  return influence(x, compute_ujk(params, alpha));
}

Eigen::Vector3d influence_at_level(double level, const SandwichCovariance& sc) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "quantile level must lie in (0, 1)");
  }
  const double h = -std::log(-std::log(level));
  return influence_at_point(detail::StandardPoint::from_h(h, sc.params.xi()), sc);
}

std::vector<double> geometric_level_grid(double min_level, int per_decade) {
  if (!(min_level > 0.0 && min_level < 0.5) || per_decade < 1) {
    throw Error(ErrorKind::InvalidArgument, "level grid needs 0 < min_level < 0.5, per_decade >= 1");
  }
  std::vector<double> tail;
  const double top = std::log10(0.5);
  const double bottom = std::log10(min_level);
  const int steps = static_cast<int>(std::ceil((top - bottom) * per_decade));
  for (int k = 0; k < steps; ++k) {
    tail.push_back(std::pow(10.0, bottom + static_cast<double>(k) / per_decade));
  }
  std::vector<double> grid(tail);
  grid.push_back(0.5);
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) grid.push_back(1.0 - *it);
  return grid;
}

}  // namespace robgev
