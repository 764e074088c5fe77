#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <numbers>

#include "oracles.hpp"
#include "robgev/asymptotics.hpp"
#include "robgev/calculus.hpp"
#include "robgev/error.hpp"
#include "robgev/mdpd.hpp"

using namespace robgev;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no robgev::Error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Ujk, AlphaZeroIsInverseFisher) {
  for (double xi : {-0.3, 0.0, 0.2, 0.6}) {
    const auto sc = compute_ujk({0, 1, xi}, 0.0);
    EXPECT_LT((sc.J - sc.K).cwiseAbs().maxCoeff(), 1e-9) << xi;
    EXPECT_LT(sc.u_quadrature.cwiseAbs().maxCoeff(), 1e-8) << xi;
    EXPECT_EQ(sc.U, Eigen::Vector3d::Zero());
    const Eigen::Matrix3d inv = sc.J.inverse();
    EXPECT_LT((sc.cov - inv).cwiseAbs().maxCoeff(), 1e-8 * inv.cwiseAbs().maxCoeff()) << xi;
  }
}

TEST(Ujk, GumbelFisherLocationScaleBlock) {
  // Known Gumbel Fisher information for (mu, sigma) at unit scale.
  const auto sc = compute_ujk({0, 1, 0}, 0.0);
  const double g = std::numbers::egamma;
  EXPECT_NEAR(sc.J(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(sc.J(0, 1), g - 1.0, 1e-10);
  EXPECT_NEAR(sc.J(1, 1), (1 - g) * (1 - g) + std::numbers::pi * std::numbers::pi / 6, 1e-10);
}

TEST(Ujk, MatchesIndependentQuadrature) {
  for (double alpha : {0.1, 0.5}) {
    const GevParams p(0.3, 1.4, 0.15);
    const auto raw = score_integrals(p, alpha);
    for (int i = 0; i < 3; ++i) {
      const double u = oracle::integrate_over_support(
          [&](double x) {
            return pdf(x, p) > 0.0 ? score(x, p).as_vector()[i] * std::pow(pdf(x, p), 1 + alpha) : 0.0;
          },
          p, 1e-12);
      EXPECT_NEAR(raw.s_f1a[i], u, 1e-9);
      for (int j = 0; j < 3; ++j) {
        const double v = oracle::integrate_over_support(
            [&](double x) {
              if (!(pdf(x, p) > 0.0)) return 0.0;  // also skips underflowed tails
              const auto s = score(x, p).as_vector();
              return s[i] * s[j] * std::pow(pdf(x, p), 1 + 2 * alpha);
            },
            p, 1e-12);
        EXPECT_NEAR(raw.ss_f12a(i, j), v, 1e-9);
      }
    }
  }
}

TEST(Ujk, SymmetricPositiveDefinite) {
  for (double alpha : {0.0, 0.1, 0.25, 0.5}) {
    for (double xi : {-0.3, -0.1, 0.0, 0.3, 0.7}) {
      if (xi <= integrability_bound(alpha)) continue;
      const auto sc = compute_ujk({0, 1, xi}, alpha);
      EXPECT_LT((sc.J - sc.J.transpose()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((sc.K - sc.K.transpose()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((sc.cov - sc.cov.transpose()).cwiseAbs().maxCoeff(), 1e-10 * sc.cov.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ej(sc.J), ek(sc.K);
      EXPECT_GT(ej.eigenvalues().minCoeff(), -1e-10);
      EXPECT_GT(ek.eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(Ujk, Errors) {
  EXPECT_DOUBLE_EQ(integrability_bound(0.0), -0.5);
  EXPECT_DOUBLE_EQ(integrability_bound(0.1), -1.1 / 2.1);
  EXPECT_EQ(kind_of([] { compute_ujk({0, 1, -0.5}, 0.0); }), ErrorKind::IntegrabilityViolation);
  EXPECT_EQ(kind_of([] { compute_ujk({0, 1, -0.6}, 0.25); }), ErrorKind::IntegrabilityViolation);
  EXPECT_EQ(kind_of([] { compute_ujk({0, 1, 0}, -0.1); }), ErrorKind::InvalidArgument);
  AsymptoticsOptions tight;
  tight.condition_cap = 1.5;
  EXPECT_EQ(kind_of([&] { compute_ujk({0, 1, 0.1}, 0.1, tight); }), ErrorKind::SingularJ);
}

TEST(Ujk, ScaleEquivariance) {
  const auto a = compute_ujk({0, 1, 0.2}, 0.1), b = compute_ujk({5, 3, 0.2}, 0.1);
  // Location/scale variances scale with sigma^2, the shape variance is invariant.
  EXPECT_NEAR(b.cov(0, 0), 9 * a.cov(0, 0), 1e-7 * b.cov(0, 0));
  EXPECT_NEAR(b.cov(2, 2), a.cov(2, 2), 1e-7 * a.cov(2, 2));
}

TEST(StandardErrors, QuadrupledSampleHalvesErrors) {
  const auto sc = compute_ujk({0, 1, 0.1}, 0.1);
  const auto a = standard_errors(sc, 100), b = standard_errors(sc, 400);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(b[k], a[k] / 2);
}

TEST(StandardErrors, PlugInMatchesObservedInformation) {
  const auto data = sample(5000, {0, 1, 0}, 321);
  FitResult r = fit_ml(data, {});
  ASSERT_TRUE(r.converged);
  attach_covariance(r, data.size());
  ASSERT_TRUE(r.std_errors);
  Eigen::Matrix3d obs = Eigen::Matrix3d::Zero();
  for (double x : data) obs += information(x, r.params).value;
  const Eigen::Matrix3d cov = obs.inverse();
  for (int k = 0; k < 3; ++k) {
    const double se = std::sqrt(cov(k, k));
    EXPECT_NEAR((*r.std_errors)[k], se, 0.1 * se) << k;
  }
}

TEST(Influence, ReconstructsWeightedScore) {
  for (double alpha : {0.0, 0.1, 0.5}) {
    const GevParams p(0.2, 1.3, 0.1);
    const auto sc = compute_ujk(p, alpha);
    for (double x : {-1.0, 0.5, 4.0}) {
      const Eigen::Vector3d lhs = sc.J * influence(x, sc) + sc.U;
      const Eigen::Vector3d rhs = score(x, p).as_vector() * std::pow(pdf(x, p), alpha);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Influence, LevelAndPointAgree) {
  const auto sc = compute_ujk({0, 1, -0.2}, 0.25);
  for (double u : {0.01, 0.5, 0.97}) {
    const Eigen::Vector3d a = influence_at_level(u, sc), b = influence(quantile(u, sc.params), sc);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff()));
  }
  EXPECT_THROW(influence(10.0, sc), Error);  // beyond the upper endpoint 5
}

TEST(Influence, LikelihoodGrowsTowardLowerEndpoint) {
  const auto sc = compute_ujk({0, 1, 0.3}, 0.0);
  double prev = 0.0;
  for (double level = 1e-2; level >= 1e-12; level /= 10) {
    const double v = influence_at_level(level, sc).norm();
    EXPECT_GT(v, prev) << level;
    prev = v;
  }
}

TEST(Influence, BoundedWhereDensityPowerDominates) {
  // alpha = 0.5 at a moderate positive shape: the weighted score decays at both ends.
  const auto sc = compute_ujk({0, 1, 0.1}, 0.5);
  auto sup_to = [&](double min_level) {
    double sup = 0.0;
    for (double level : geometric_level_grid(min_level, 4)) {
      sup = std::max(sup, influence_at_level(level, sc).cwiseAbs().maxCoeff());
    }
    return sup;
  };
  const double coarse = sup_to(1e-9), fine = sup_to(1e-12);
  EXPECT_TRUE(std::isfinite(fine));
  EXPECT_LT(fine - coarse, 1e-6);
}

TEST(Influence, GeometricGrid) {
  const auto g = geometric_level_grid(1e-4, 2);
  ASSERT_FALSE(g.empty());
  EXPECT_DOUBLE_EQ(g.front(), 1e-4);
  EXPECT_NEAR(g.back(), 1 - 1e-4, 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  EXPECT_NE(std::find(g.begin(), g.end(), 0.5), g.end());
}

TEST(AsymptoticVariance, RobustCurveStaysNearLikelihood) {
  for (double xi = -0.2; xi <= 0.4 + 1e-9; xi += 0.1) {
    const auto ml = compute_ujk({0, 1, xi}, 0.0), md = compute_ujk({0, 1, xi}, 0.1);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(md.cov(k, k), ml.cov(k, k) * (1 - 1e-6)) << xi;
      EXPECT_LT(md.cov(k, k), 1.1 * ml.cov(k, k)) << "xi=" << xi << " k=" << k;
    }
  }
}

TEST(AsymptoticVariance, IncreasesWithAlpha) {
  double prev = 0.0;
  for (double alpha : {0.0, 0.1, 0.25, 0.5}) {
    const double v = compute_ujk({0, 1, 0.1}, alpha).cov(2, 2);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(AsymptoticVariance, CoverageOfPlugInIntervals) {
  // 95% Wald intervals from the sandwich covariance, clean data.
  for (double xi0 : {-0.1, 0.0, 0.1}) {
    for (double alpha : {0.05, 0.1}) {
      const GevParams truth(0, 1, xi0);
      const int reps = 500;
      const std::size_t n = 2000;
      std::array<int, 3> covered{};
      int used = 0;
      for (int r = 0; r < reps; ++r) {
        const auto data = sample(n, truth, 1000003ULL * (r + 1) + static_cast<std::uint64_t>(alpha * 1000) +
                                               static_cast<std::uint64_t>((xi0 + 1) * 100) * 7919);
        MdpdConfig cfg;
        cfg.alpha = alpha;
        FitResult fit = fit_mdpd(data, cfg);
        if (!fit.converged) continue;
        std::array<double, 3> se;
        try {
          se = standard_errors(fit, n);
        } catch (const Error&) {
          continue;
        }
        ++used;
        const std::array<double, 3> est{fit.params.mu(), fit.params.sigma(), fit.params.xi()};
        const std::array<double, 3> tru{0.0, 1.0, xi0};
        for (int k = 0; k < 3; ++k) covered[k] += std::abs(est[k] - tru[k]) <= 1.959964 * se[k];
      }
      ASSERT_GE(used, 490);
      for (int k = 0; k < 3; ++k) {
        const double c = static_cast<double>(covered[k]) / used;
        EXPECT_GE(c, 0.90) << "xi0=" << xi0 << " alpha=" << alpha << " k=" << k;
        EXPECT_LE(c, 0.98) << "xi0=" << xi0 << " alpha=" << alpha << " k=" << k;
      }
    }
  }
}
