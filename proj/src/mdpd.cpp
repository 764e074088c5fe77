#include "robgev/mdpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "robgev/error.hpp"
#include "robgev/optimize.hpp"

namespace robgev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double softplus(double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); }
double softplus_inverse(double y) { return y > 30.0 ? y : std::log(std::expm1(y)); }

void validate_data(std::span<const double> data) {
  if (data.empty()) throw Error(ErrorKind::EmptySeries, "no observations to fit");
  for (double x : data) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite observation");
  }
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (*lo == *hi) {
    throw Error(ErrorKind::DegenerateData, "all observations are equal (" + std::to_string(*lo) + ")");
  }
}

double mdpd_shape_floor(double alpha) { return -(1.0 + alpha) / alpha; }

// Unconstrained coordinates (location offset in units of the start scale,
// log relative scale, softplus-inverse of the shape excess over the floor).
struct Reparam {
  double location;
  double scale;
  double shape_floor;

  Eigen::VectorXd to_free(const GevParams& p) const {
    Eigen::VectorXd c(3);
    c << (p.mu() - location) / scale, std::log(p.sigma() / scale),
        softplus_inverse(p.xi() - shape_floor);
    return c;
  }

  // Returns false when the free point does not map to valid parameters.
  bool to_params(const Eigen::VectorXd& c, double& mu, double& sigma, double& xi) const {
    mu = location + scale * c[0];
    sigma = scale * std::exp(c[1]);
    const double excess = softplus(c[2]);
    xi = shape_floor + excess;
    return std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0 && std::isfinite(xi) &&
           excess > 0.0;
  }
};

GevParams gumbel_moment_estimate(std::span<const double> data) {
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / std::max(1.0, n - 1.0));
  const double sigma = std::max(sd * std::sqrt(6.0) / std::numbers::pi, 1e-12);
  return {mean - std::numbers::egamma * sigma, sigma, 0.0};
}

bool covers(const GevParams& p, std::span<const double> data) {
  const auto s = p.support();
  return std::all_of(data.begin(), data.end(), [&](double x) { return s.contains(x); });
}

// Deterministic multi-start schedule. The likelihood path needs every start
// to contain the data; shapes are pulled toward 0 until it does.
std::vector<GevParams> starting_points(std::span<const double> data, int restarts, bool need_cover) {
  const GevParams pwm = pwm_estimate(data);
  const GevParams gum = gumbel_moment_estimate(data);
  std::vector<GevParams> candidates = {pwm, gum,
                                       GevParams(pwm.mu(), pwm.sigma(), pwm.xi() + 0.2),
                                       GevParams(pwm.mu(), pwm.sigma(), pwm.xi() - 0.2),
                                       GevParams(gum.mu(), gum.sigma() * 1.5, 0.1)};
  std::vector<GevParams> out;
  for (const auto& c : candidates) {
    if (static_cast<int>(out.size()) > restarts) break;
    GevParams start = c;
    if (need_cover) {
      for (int k = 0; k < 40 && !covers(start, data); ++k) {
        start = GevParams(start.mu(), start.sigma(), start.xi() * 0.5);
      }
      if (!covers(start, data)) start = GevParams(start.mu(), start.sigma(), 0.0);
    }
    out.push_back(start);
  }
  return out;
}

template <class Objective>
FitResult minimize(std::span<const double> data, const MdpdConfig& config, double alpha,
                   double shape_floor, Objective&& objective) {
  const bool likelihood = alpha == 0.0;
  const auto starts = starting_points(data, std::max(0, config.restarts), likelihood);

  FitResult best{starts.front(), alpha, kInf, false, 0, {}, {}, {}};
  if (data.size() < 10) {
    best.messages.push_back("warning: only " + std::to_string(data.size()) +
                            " observations; estimates are unreliable below 10");
  }

  NelderMeadOptions nm;
  nm.max_iterations = config.max_iterations;
  nm.f_tolerance = config.tolerance;
  nm.x_tolerance = std::sqrt(config.tolerance);

  int evaluations = 0;
  bool have_best = false;
  for (const auto& start : starts) {
    // The reparameterization is anchored at the start so that the search is
    // equivariant under affine maps of the data.
    const Reparam rp{start.mu(), start.sigma(), shape_floor};
    if (!(start.xi() > shape_floor)) continue;
    auto f = [&](const Eigen::VectorXd& c) {
      double mu, sigma, xi;
      if (!rp.to_params(c, mu, sigma, xi)) return kInf;
      return objective(GevParams(mu, sigma, xi));
    };
    Eigen::VectorXd x0 = rp.to_free(start);
    const double slope = 1.0 / (1.0 + std::exp(-x0[2]));  // d xi / d eta
    Eigen::VectorXd steps(3);
    steps << 0.1, 0.1, 0.1 / std::max(slope, 1e-3);

    NelderMeadResult run = nelder_mead(f, x0, steps, nm);
    evaluations += run.evaluations;
    // One restart from the reported minimum guards against a collapsed simplex.
    if (std::isfinite(run.value)) {
      NelderMeadResult again = nelder_mead(f, run.x, steps * 0.1, nm);
      evaluations += again.evaluations;
      const bool stable = (again.x - run.x).lpNorm<Eigen::Infinity>() <= 10.0 * nm.x_tolerance;
      if (again.value <= run.value) {
        again.converged = again.converged && (run.converged || stable);
        run = again;
      }
    }
    double mu, sigma, xi;
    if (!std::isfinite(run.value) || !rp.to_params(run.x, mu, sigma, xi)) continue;
    const bool interior = xi - shape_floor > config.xi_lower_margin;
    if (!have_best || run.value < best.objective_value) {
      best.params = GevParams(mu, sigma, xi);
      best.objective_value = run.value;
      best.converged = run.converged && interior;
      have_best = true;
    }
  }
  best.n_evaluations = evaluations;
  if (!have_best) {
    best.messages.push_back("no starting point produced a finite objective");
  } else if (!best.converged) {
    best.messages.push_back("optimizer stopping criterion not met; best point returned");
  }
  return best;
}

}  // namespace

double power_integral(const GevParams& p, double alpha) {
  const double a = alpha * (p.xi() + 1.0) + 1.0;
  return std::exp(-alpha * std::log(p.sigma()) - a * std::log1p(alpha) + std::lgamma(a));
}

double mdpd_objective(const GevParams& p, std::span<const double> data, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "MDPD objective requires alpha > 0");
  }
  if (!(p.xi() > mdpd_shape_floor(alpha))) {
    throw Error(ErrorKind::InvalidArgument,
                "shape " + std::to_string(p.xi()) + " outside the MDPD domain xi > -(1+alpha)/alpha");
  }
  if (data.empty()) throw Error(ErrorKind::EmptySeries, "MDPD objective needs data");
  double sum = 0.0;
  for (double x : data) sum += std::exp(alpha * log_pdf(x, p));
  return power_integral(p, alpha) - (1.0 + 1.0 / alpha) * sum / static_cast<double>(data.size());
}

double negative_log_likelihood(const GevParams& p, std::span<const double> data) {
  double sum = 0.0;
  for (double x : data) {
    const double lp = log_pdf(x, p);
    if (!std::isfinite(lp)) return kInf;
    sum += lp;
  }
  return -sum / static_cast<double>(data.size());
}

GevParams pwm_estimate(std::span<const double> data) {
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const auto n = x.size();
  if (n < 3) return gumbel_moment_estimate(data);
  const double nd = static_cast<double>(n);
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i);
    b0 += x[i];
    b1 += r / (nd - 1.0) * x[i];
    b2 += r * (r - 1.0) / ((nd - 1.0) * (nd - 2.0)) * x[i];
  }
  b0 /= nd;
  b1 /= nd;
  b2 /= nd;
  const double l2 = 2.0 * b1 - b0;
  const double denom = 3.0 * b2 - b0;
  if (!(l2 > 0.0) || denom == 0.0) return gumbel_moment_estimate(data);
  const double c = l2 / denom - std::log(2.0) / std::log(3.0);
  // Hosking's k is the negated shape.
  double k = 7.8590 * c + 2.9554 * c * c;
  k = std::clamp(k, -0.9, 0.5);
  if (std::abs(k) < 1e-6) {
    const double sigma = l2 / std::log(2.0);
    return {b0 - std::numbers::egamma * sigma, sigma, 0.0};
  }
  const double g = std::tgamma(1.0 + k);
  const double sigma = l2 * k / (g * (1.0 - std::pow(2.0, -k)));
  const double mu = b0 + sigma * (g - 1.0) / k;
  if (!(sigma > 0.0) || !std::isfinite(mu)) return gumbel_moment_estimate(data);
  return {mu, sigma, -k};
}

FitResult fit_mdpd(std::span<const double> data, const MdpdConfig& config) {
  if (config.alpha == 0.0) return fit_ml(data, config);
  if (!(config.alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be >= 0");
  validate_data(data);
  const double alpha = config.alpha;
  const double floor = mdpd_shape_floor(alpha) + config.xi_lower_margin;
  return minimize(data, config, alpha, floor,
                  [&](const GevParams& p) { return mdpd_objective(p, data, alpha); });
}

FitResult fit_ml(std::span<const double> data, const MdpdConfig& config) {
  validate_data(data);
  const double floor = config.ml_xi_floor + config.xi_lower_margin;
  return minimize(data, config, 0.0, floor,
                  [&](const GevParams& p) { return negative_log_likelihood(p, data); });
}

bool plausibility_screen(const FitResult& result, const ScreenBounds& bounds) {
  return result.converged && result.params.mu() >= bounds.mu_min &&
         result.params.mu() <= bounds.mu_max && result.params.sigma() <= bounds.sigma_max;
}

}  // namespace robgev
