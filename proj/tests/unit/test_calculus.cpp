#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "robgev/calculus.hpp"
#include "robgev/error.hpp"

using namespace robgev;

namespace {

void expect_close(const Eigen::VectorXd& got, const Eigen::VectorXd& want, double rel, const std::string& what) {
  const double scale = std::max(want.lpNorm<Eigen::Infinity>(), 1e-300);
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    EXPECT_LE(std::abs(got[i] - want[i]), rel * std::max(std::abs(want[i]), scale))
        << what << " component " << i << ": " << got[i] << " vs " << want[i];
  }
}

Eigen::Matrix3d score_jacobian(double x, const GevParams& p) {
  Eigen::Matrix3d J;
  for (int k = 0; k < 3; ++k) {
    const double h = 1e-4 * oracle::base_step(p, k);
    const double c = oracle::component(p, k);
    auto s = [&](double d) { return score(x, oracle::with(p, k, c + d)).as_vector(); };
    const Eigen::Vector3d d1 = (s(h) - s(-h)) / (2 * h);
    const Eigen::Vector3d d2 = (s(h / 2) - s(-h / 2)) / h;
    J.col(k) = (4 * d2 - d1) / 3;
  }
  return J;
}

}  // namespace

TEST(Score, AtLocation) {
  for (double xi : {-0.4, -0.1, 0.0, 0.2, 0.7}) {
    const GevParams p(1.5, 2.0, xi);
    const Score s = score(1.5, p);
    EXPECT_NEAR(s.d_mu, xi / 2.0, 1e-14);
    EXPECT_NEAR(s.d_sigma, -1.0 / 2.0, 1e-14);
  }
}

TEST(Score, MatchesFiniteDifferences) {
  const GevParams p(0, 1, 0.2);
  expect_close(score(1.2, p).as_vector(), oracle::fd_gradient(1.2, p), 1e-6, "score(1.2)");
}

TEST(Score, RejectsPointsOutsideSupport) {
  EXPECT_THROW(score(-10.0, {0, 1, 0.3}), Error);
  EXPECT_THROW(score(2.0, {0, 1, -0.5}), Error);  // exactly the endpoint
  EXPECT_THROW(information(5.0, {0, 1, -0.5}), Error);
}

TEST(Score, ShapeComponentInvariantUnderStandardization) {
  for (double xi : {-0.3, 1e-7, 0.4}) {
    const GevParams p(3.0, 2.5, xi), unit(0, 1, xi);
    for (double x : {1.0, 3.0, 6.0}) {
      if (!p.support().contains(x)) continue;
      const Score a = score(x, p), b = score((x - 3.0) / 2.5, unit);
      EXPECT_NEAR(a.d_xi, b.d_xi, 1e-12 * std::max(1.0, std::abs(b.d_xi)));
      EXPECT_NEAR(a.d_mu, b.d_mu / 2.5, 1e-13);
      EXPECT_NEAR(a.d_sigma, b.d_sigma / 2.5, 1e-13);
    }
  }
}

TEST(Information, AtLocation) {
  EXPECT_NEAR(information(0.0, {0, 1, 0.3})(0, 0), 0.91, 1e-14);
  EXPECT_NEAR(information(0.0, {0, 1, 0.0})(0, 0), 1.0, 1e-14);
}

TEST(Information, MatchesFiniteDifferenceHessian) {
  const GevParams p(0, 1, -0.15);
  const Eigen::Matrix3d info = information(0.8, p).value;
  const Eigen::Matrix3d fd = -oracle::fd_hessian(0.8, p);
  for (int i = 0; i < 3; ++i) {
    expect_close(info.row(i).transpose(), fd.row(i).transpose(), 1e-5, "row " + std::to_string(i));
  }
  EXPECT_EQ(info, info.transpose());
}

TEST(Information, EqualsNegativeScoreJacobian) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu(-2, 2), lsig(-1, 1), xi(-0.45, 0.8), lev(0.02, 0.98);
  for (int k = 0; k < 100; ++k) {
    const double shape = (k % 5 == 0) ? xi(rng) * 1e-7 : xi(rng);
    const GevParams p(mu(rng), std::exp(lsig(rng)), shape);
    const double x = quantile(lev(rng), p);
    const Eigen::Matrix3d info = information(x, p).value;
    const Eigen::Matrix3d jac = -score_jacobian(x, p);
    for (int i = 0; i < 3; ++i) {
      expect_close(info.row(i).transpose(), jac.row(i).transpose(), 1e-4,
                   "xi=" + std::to_string(shape) + " row " + std::to_string(i));
    }
  }
}

TEST(Calculus, RoutesAgreeAroundCutoff) {
  // Closed forms and the chain-rule evaluation must coincide where both are
  // accurate, so that the switch at the cutoff is invisible.
  for (double xi : {-0.05, -0.02, -kClosedFormShapeCutoff, kClosedFormShapeCutoff, 0.03}) {
    for (double z : {-1.5, -0.3, 0.4, 2.5}) {
      const auto pt = detail::StandardPoint::from_z(z, xi);
      if (!pt.inside) continue;
      const auto a = detail::closed_form(pt, 1.3, xi);
      const auto b = detail::chain_rule(pt, 1.3, xi);
      expect_close(a.score.as_vector(), b.score.as_vector(), 1e-9, "score");
      for (int i = 0; i < 3; ++i) {
        expect_close(a.info.value.row(i).transpose(), b.info.value.row(i).transpose(), 1e-7, "info");
      }
    }
  }
}

TEST(Calculus, GumbelLimit) {
  // Exact xi = 0 values against a small-but-nonzero shape on both sides.
  for (double z : {-1.0, 0.5, 3.0}) {
    const Score s0 = score(z, {0, 1, 0});
    for (double xi : {-1e-9, 1e-9}) {
      const Score s = score(z, {0, 1, xi});
      EXPECT_NEAR(s.d_xi, s0.d_xi, 1e-7 * std::max(1.0, std::abs(s0.d_xi)));
      const Eigen::Matrix3d d = information(z, {0, 1, xi}).value - information(z, {0, 1, 0}).value;
      EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-6);
    }
    // d log f / d xi at xi = 0 is z^2/2 (1 - e^{-z}) - z.
    EXPECT_NEAR(s0.d_xi, 0.5 * z * z * (1 - std::exp(-z)) - z, 1e-13 * std::max(1.0, std::abs(z * z)));
  }
}

TEST(Calculus, ExpectedScoreVanishes) {
  for (double xi : {-0.3, 0.0, 0.25}) {
    const GevParams p(0.4, 1.6, xi);
    for (int k = 0; k < 3; ++k) {
      const double v = oracle::integrate_over_support(
          [&](double x) { return pdf(x, p) > 0.0 ? score(x, p).as_vector()[k] * pdf(x, p) : 0.0; }, p,
          1e-12);
      EXPECT_NEAR(v, 0.0, 1e-6) << "xi=" << xi << " component " << k;
    }
  }
}
