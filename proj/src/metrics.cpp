#include "robgev/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "robgev/detail/kernel.hpp"
#include "robgev/error.hpp"
#include "robgev/quadrature.hpp"

namespace robgev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection on a bracketing pair; g(lo) and g(hi) have opposite signs.
template <class G>
double bisect(G&& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Gumbel-scale points where the two quantile functions cross. The
// difference is a sum of at most three exponentials in h, so it has at most
// two sign changes; a fine scan over the region carrying the mass finds them.
std::vector<double> quantile_crossings(const GevParams& a, const GevParams& b) {
  auto diff = [&](double h) {
    return (a.mu() - b.mu()) + a.sigma() * standard_quantile_from_gumbel(h, a.xi()) -
           b.sigma() * standard_quantile_from_gumbel(h, b.xi());
  };
  std::vector<double> roots;
  constexpr double lo = -6.0, hi = 80.0, step = 0.02;
  double prev_h = lo;
  double prev = diff(lo);
  for (double h = lo + step; h <= hi; h += step) {
    const double cur = diff(h);
    if (cur == 0.0) {
      roots.push_back(h);
    } else if (prev != 0.0 && (cur < 0.0) != (prev < 0.0)) {
      roots.push_back(bisect(diff, prev_h, h));
    }
    prev = cur;
    prev_h = h;
  }
  return roots;
}

double integrate_pieces(const std::vector<double>& breaks, double lower, double upper,
                        const quad::Options& opt, auto&& f) {
  // f is integrated over [lower, upper] (either may be infinite), split at
  // the interior breaks.
  std::vector<double> cuts;
  for (double c : breaks) {
    if (c > lower && c < upper) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty() && std::isinf(lower) && std::isinf(upper)) cuts.push_back(0.0);

  auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
  double total = 0.0;
  std::vector<double> nodes;
  nodes.push_back(lower);
  nodes.insert(nodes.end(), cuts.begin(), cuts.end());
  nodes.push_back(upper);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    if (std::isinf(a) && std::isinf(b)) continue;
    if (std::isinf(a)) {
      total += quad::integrate_from_minus_infinity<1>(g, b, opt).value[0];
    } else if (std::isinf(b)) {
      total += quad::integrate_to_infinity<1>(g, a, opt).value[0];
    } else {
      total += quad::integrate<1>(g, a, b, opt).value[0];
    }
  }
  return total;
}

// z(h; xi) * e^{-m}, finite even when z itself overflows.
double scaled_standard_quantile(double h, double xi, double m) {
  const double v = xi * h;
  if (m < 600.0) return standard_quantile_from_gumbel(h, xi) * std::exp(-m);
  if (std::abs(v) < 1e-3) return h * detail::expm1_ratio(v) * std::exp(-m);
  return (std::exp(v - m) - std::exp(-m)) / xi;
}

double w1_quantile(const GevParams& a, const GevParams& b, const quad::Options& opt) {
  auto integrand = [&](double h) {
    const double log_dF = -h - std::exp(-h);
    if (!(log_dF > -1e6)) return 0.0;
    // Factor out the dominant exponential so shapes close to 1 keep the
    // slowly decaying upper tail instead of overflowing.
    const double m = std::max({0.0, a.xi() * h, b.xi() * h});
    const double d = (a.mu() - b.mu()) * std::exp(-m) +
                     a.sigma() * scaled_standard_quantile(h, a.xi(), m) -
                     b.sigma() * scaled_standard_quantile(h, b.xi(), m);
    const double v = std::abs(d) * std::exp(m + log_dF);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate_pieces(quantile_crossings(a, b), -kInf, kInf, opt, integrand);
}

// Lower and upper tail probabilities F and 1 - F without cancellation.
void tail_probabilities(double x, const GevParams& p, double& F, double& S) {
  const auto s = p.support();
  if (!(x > s.lower)) {
    F = 0.0;
    S = 1.0;
    return;
  }
  if (!(x < s.upper)) {
    F = 1.0;
    S = 0.0;
    return;
  }
  const auto pt = detail::StandardPoint::from_z((x - p.mu()) / p.sigma(), p.xi());
  const double w = std::exp(-pt.h);
  F = std::exp(-w);
  S = -std::expm1(-w);
}

double w1_cdf(const GevParams& a, const GevParams& b, const quad::Options& opt) {
  auto abs_diff = [&](double x) {
    double fa, sa, fb, sb;
    tail_probabilities(x, a, fa, sa);
    tail_probabilities(x, b, fb, sb);
    return std::min(fa, fb) < 0.5 ? std::abs(fa - fb) : std::abs(sa - sb);
  };
  const auto sa = a.support();
  const auto sb = b.support();
  const double lower = std::min(sa.lower, sb.lower);
  const double upper = std::max(sa.upper, sb.upper);

  std::vector<double> breaks;
  for (double h : quantile_crossings(a, b)) {
    breaks.push_back(a.mu() + a.sigma() * standard_quantile_from_gumbel(h, a.xi()));
  }
  for (double e : {sa.lower, sa.upper, sb.lower, sb.upper}) {
    if (std::isfinite(e)) breaks.push_back(e);
  }
  // Infinite tails decay only algebraically when xi > 0, so they are
  // integrated on an exponential scale x = anchor +/- c (e^s - 1).
  const double c = std::max(a.sigma(), b.sigma());
  const double left_anchor = std::isinf(lower) ? std::min(a.mu(), b.mu()) - 10.0 * c : lower;
  const double right_anchor = std::isinf(upper) ? std::max(a.mu(), b.mu()) + 10.0 * c : upper;
  breaks.push_back(left_anchor);
  breaks.push_back(right_anchor);

  double total = integrate_pieces(breaks, left_anchor, right_anchor, opt, abs_diff);
  auto exp_tail = [&](double anchor, double sign) {
    return [&, anchor, sign](double s) {
      const double e = std::exp(s);
      const double x = anchor + sign * c * (e - 1.0);
      if (!std::isfinite(x)) return 0.0;
      const double v = abs_diff(x) * c * e;
      return std::isfinite(v) ? v : 0.0;
    };
  };
  if (std::isinf(lower)) total += integrate_pieces({}, 0.0, kInf, opt, exp_tail(left_anchor, -1.0));
  if (std::isinf(upper)) total += integrate_pieces({}, 0.0, kInf, opt, exp_tail(right_anchor, 1.0));
  return total;
}

}  // namespace

double wasserstein1(const W1Request& request) {
  for (const auto* p : {&request.first, &request.second}) {
    if (!(p->xi() < 1.0)) {
      throw Error(ErrorKind::InfiniteMoment,
                  "Wasserstein-1 needs shapes below 1 (got " + std::to_string(p->xi()) + ")");
    }
  }
  if (request.first == request.second) return 0.0;
  quad::Options opt;
  opt.abs_tolerance = request.tolerance;
  opt.rel_tolerance = request.tolerance;
  return request.method == W1Method::QuantileIntegral
             ? w1_quantile(request.first, request.second, opt)
             : w1_cdf(request.first, request.second, opt);
}

}  // namespace robgev
