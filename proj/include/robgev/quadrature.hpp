#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands.
// Several integrals sharing an expensive kernel are accumulated in one pass.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace robgev::quad {

struct Options {
  double abs_tolerance = 1e-12;
  double rel_tolerance = 1e-12;
  int max_subdivisions = 4000;
};

template <std::size_t N>
struct Result {
  std::array<double, N> value{};
  double error = 0.0;  // max-norm error estimate
  int subdivisions = 0;
  bool within_tolerance = false;
};

namespace detail {

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Segment {
  double a, b;
  std::array<double, N> value;
  double error;
};

template <std::size_t N, class F>
Segment<N> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> kron{}, gauss{};
  auto accumulate = [&](const std::array<double, N>& v, double wk, double wg) {
    for (std::size_t k = 0; k < N; ++k) {
      kron[k] += wk * v[k];
      gauss[k] += wg * v[k];
    }
  };
  accumulate(f(center), kKronrod[7], kGauss[3]);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double wg = (j % 2 == 1) ? kGauss[j / 2] : 0.0;
    accumulate(f(center - dx), kKronrod[j], wg);
    accumulate(f(center + dx), kKronrod[j], wg);
  }
  Segment<N> s{a, b, {}, 0.0};
  for (std::size_t k = 0; k < N; ++k) {
    s.value[k] = kron[k] * half;
    s.error = std::max(s.error, std::abs((kron[k] - gauss[k]) * half));
  }
  return s;
}

}  // namespace detail

/// Integrates f over the finite interval [a, b]. f maps double to
/// std::array<double, N>.
template <std::size_t N, class F>
Result<N> integrate(F f, double a, double b, const Options& opt = {}) {
  using Seg = detail::Segment<N>;
  auto by_error = [](const Seg& x, const Seg& y) { return x.error < y.error; };
  std::vector<Seg> heap{detail::gk15<N>(f, a, b)};
  Result<N> out;
  while (true) {
    std::array<double, N> total{};
    double err = 0.0;
    for (const auto& s : heap) {
      for (std::size_t k = 0; k < N; ++k) total[k] += s.value[k];
      err += s.error;
    }
    double scale = 0.0;
    for (double v : total) scale = std::max(scale, std::abs(v));
    out.value = total;
    out.error = err;
    out.subdivisions = static_cast<int>(heap.size()) - 1;
    if (err <= std::max(opt.abs_tolerance, opt.rel_tolerance * scale)) {
      out.within_tolerance = true;
      return out;
    }
    if (out.subdivisions >= opt.max_subdivisions) return out;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      return out;
    }
    heap.push_back(detail::gk15<N>(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gk15<N>(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

/// Integrates over [a, +inf) through x = a + s / (1 - s).
template <std::size_t N, class F>
Result<N> integrate_to_infinity(F f, double a, const Options& opt = {}) {
  auto mapped = [&](double s) {
    std::array<double, N> v{};
    const double one_minus = 1.0 - s;
    if (one_minus <= 0.0) return v;
    const double x = a + s / one_minus;
    if (!std::isfinite(x)) return v;
    v = f(x);
    const double jac = 1.0 / (one_minus * one_minus);
    for (auto& e : v) e *= jac;
    return v;
  };
  return integrate<N>(mapped, 0.0, 1.0, opt);
}

/// Integrates over (-inf, b] through x = b - s / (1 - s).
template <std::size_t N, class F>
Result<N> integrate_from_minus_infinity(F f, double b, const Options& opt = {}) {
  return integrate_to_infinity<N>([&](double y) { return f(2.0 * b - y); }, b, opt);
}

}  // namespace robgev::quad
