#include <gtest/gtest.h>

#include <random>

#include "robgev/error.hpp"
#include "robgev/metrics.hpp"

using namespace robgev;

namespace {

// E|G| for a standard Gumbel G, which equals W1 between GEV(0,1,0) and
// GEV(0,2,0). Composite Simpson with 10^6 panels in the Gumbel variate.
double gumbel_abs_mean_oracle() {
  const int n = 1'000'000;
  const double a = -8.0, b = 60.0, h = (b - a) / n;
  auto g = [](double v) { return std::abs(v) * std::exp(-v - std::exp(-v)); };
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

double w1(const GevParams& a, const GevParams& b, W1Method m = W1Method::QuantileIntegral) {
  return wasserstein1(W1Request{a, b, m});
}

}  // namespace

TEST(Wasserstein, Examples) {
  EXPECT_NEAR(w1({0, 1, 0}, {1, 1, 0}), 1.0, 1e-9);
  EXPECT_EQ(w1({0.3, 1.2, 0.4}, {0.3, 1.2, 0.4}), 0.0);
  EXPECT_NEAR(w1({0, 1, 0}, {1, 1, 0}, W1Method::CdfIntegral), 1.0, 1e-9);
}

TEST(Wasserstein, GumbelScalePair) {
  const double oracle = gumbel_abs_mean_oracle();
  EXPECT_NEAR(w1({0, 1, 0}, {0, 2, 0}), oracle, 1e-8);
  EXPECT_NEAR(w1({0, 1, 0}, {0, 2, 0}, W1Method::CdfIntegral), oracle, 1e-7);
}

TEST(Wasserstein, Symmetric) {
  const GevParams a(0.1, 0.8, -0.3), b(-0.5, 1.6, 0.6);
  EXPECT_NEAR(w1(a, b), w1(b, a), 1e-12);
}

TEST(Wasserstein, InfiniteMoment) {
  try {
    w1({0, 1, 1.0}, {0, 1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfiniteMoment);
  }
  EXPECT_THROW(w1({0, 1, 0}, {0, 1, 1.3}), Error);
  EXPECT_NO_THROW(w1({0, 1, 0}, {0, 1, 0.95}));
}

TEST(Wasserstein, MethodsAgree) {
  const std::array<double, 6> shapes{-0.45, -0.2, 0.0, 0.3, 0.6, 0.85};
  for (double x1 : shapes) {
    for (double x2 : shapes) {
      const GevParams a(0, 1, x1), b(0.4, 1.3, x2);
      EXPECT_NEAR(w1(a, b), w1(a, b, W1Method::CdfIntegral), 1e-6) << x1 << " " << x2;
    }
  }
}

TEST(Wasserstein, TriangleInequality) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mu(-1, 1), sig(0.5, 2), xi(-0.4, 0.7);
  for (int k = 0; k < 100; ++k) {
    const GevParams a(mu(rng), sig(rng), xi(rng)), b(mu(rng), sig(rng), xi(rng)), c(mu(rng), sig(rng), xi(rng));
    EXPECT_LE(w1(a, c), w1(a, b) + w1(b, c) + 1e-6);
  }
}

TEST(Wasserstein, AffineEquivariance) {
  const GevParams a(0.2, 1.1, 0.25), b(-0.3, 0.7, -0.1);
  const double base = w1(a, b);
  EXPECT_NEAR(w1({a.mu() + 7, a.sigma(), a.xi()}, {b.mu() + 7, b.sigma(), b.xi()}), base, 1e-8);
  const double s = 3.5;
  EXPECT_NEAR(w1({s * a.mu(), s * a.sigma(), a.xi()}, {s * b.mu(), s * b.sigma(), b.xi()}), s * base, 1e-8 * s);
}
