#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "curveband/errors.hpp"
#include "curveband/lifting.hpp"
#include "curveband/recovery.hpp"
#include "test_helpers.hpp"

using namespace curveband;

TEST(FeatureMap, OriginIsAllOnes) {
  const Eigen::VectorXcd f = feature_map(Vec2(0, 0), FrequencySupport(5, 3));
  ASSERT_EQ(f.size(), 15);
  EXPECT_LE((f - Eigen::VectorXcd::Ones(15)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FeatureMap, HalfHalfAlternatesSign) {
  const FrequencySupport s(3, 3);
  const Eigen::VectorXcd f = feature_map(Vec2(0.5, 0.5), s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const FreqIndex k = s.index(i);
    const double expected = ((k.k1 + k.k2) % 2 == 0) ? 1.0 : -1.0;
    EXPECT_NEAR(std::abs(f(static_cast<Eigen::Index>(i)) - expected), 0.0, 1e-14);
  }
}

TEST(FeatureMap, UnitModulus) {
  const Eigen::MatrixXd pts = cbtest::random_points(20, 8);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Eigen::VectorXcd f = feature_map(pts.col(j), FrequencySupport(7, 5));
    EXPECT_LE((f.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-14);
  }
}

TEST(FeatureMatrix, EmptyPointSet) {
  const FeatureMatrix m = feature_matrix(PointSet(2), FrequencySupport(3, 3));
  EXPECT_EQ(m.data.rows(), 9);
  EXPECT_EQ(m.data.cols(), 0);
}

TEST(FeatureMatrix, AnalyticZerosAreAnnihilated) {
  // cos(2 pi x1) = 0 on x1 = 1/4, 3/4.
  Eigen::MatrixXd x(2, 6);
  x << 0.25, 0.25, 0.25, 0.75, 0.75, 0.75, 0.1, 0.5, 0.9, 0.2, 0.4, 0.6;
  const FeatureMatrix m = feature_matrix(PointSet(x), FrequencySupport(3, 1));
  Eigen::VectorXcd c(3);
  c << 0.5, 0.0, 0.5;
  EXPECT_LE((c.transpose() * m.data).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FeatureMatrix, RasterizedSamplesAlmostAnnihilated) {
  const auto p = cbtest::nonempty_curve(FrequencySupport(3, 3), 21);
  const PointSet pts = sample_curve(extract_zero_level_set(p, 512), 50, UniformArclength{}, 1);
  const FeatureMatrix m = feature_matrix(pts, p.support());
  EXPECT_LE((p.coeffs().transpose() * m.data).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(DirichletGram, DiagonalIsSupportSize) {
  const DirichletGram k = dirichlet_gram(PointSet(cbtest::random_points(30, 2)), FrequencySupport(5, 7));
  for (Eigen::Index i = 0; i < 30; ++i) EXPECT_EQ(k.data(i, i), cdouble(35.0, 0.0));
}

TEST(DirichletGram, HalfShiftOnThreeByThree) {
  Eigen::MatrixXd x(2, 2);
  x << 0.1, 0.6, 0.3, 0.3;
  const DirichletGram k = dirichlet_gram(PointSet(x), FrequencySupport(3, 3));
  EXPECT_NEAR(std::abs(k.data(0, 1) - cdouble(-3.0, 0.0)), 0.0, 1e-12);
}

TEST(DirichletGram, MatchesExplicitLifting) {
  for (int k : {1, 2, 3, 6, 9}) {
    const FrequencySupport s(k, 9 - (k % 3));
    const PointSet pts(cbtest::random_points(100, 100 + k));
    const Eigen::MatrixXcd phi = feature_matrix(pts, s).data;
    const Eigen::MatrixXcd ref = phi.adjoint() * phi;
    EXPECT_LE((dirichlet_gram(pts, s).data - ref).cwiseAbs().maxCoeff(), 1e-10) << s.to_string();
  }
}

TEST(DirichletGram, CoincidentPointsUseTheFallback) {
  Eigen::MatrixXd x(2, 3);
  x << 0.2, 0.2 + 1e-12, 0.7, 0.4, 0.4, 0.4 + 1e-13;
  const FrequencySupport s(4, 5);
  const PointSet pts(x);
  const Eigen::MatrixXcd phi = feature_matrix(pts, s).data;
  EXPECT_LE((dirichlet_gram(pts, s).data - phi.adjoint() * phi).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DirichletGram, PositiveSemidefinite) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::MatrixXcd k = dirichlet_gram(PointSet(cbtest::random_points(60, seed)), FrequencySupport(5, 5)).data;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8 * k.norm());
  }
}

TEST(DirichletGram, RankBoundForCurveSamples) {
  const FrequencySupport lambda(3, 3);
  const FrequencySupport gamma(5, 5);
  const auto p = cbtest::nonempty_curve(lambda, 8);
  const PointSet pts = sample_curve(extract_zero_level_set(p, 512), 120, UniformArclength{}, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dirichlet_gram(pts, gamma).data);
  const Eigen::VectorXd ev = eig.eigenvalues().reverse();
  // Gram eigenvalues are squared singular values of the feature matrix.
  const double tau = TolerancePolicy::rasterized(512).tau;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rank += std::sqrt(std::max(ev(i), 0.0) / ev(0)) >= tau ? 1 : 0;
  EXPECT_LE(rank, rank_bound(gamma, lambda));
}

TEST(GaussianKernel, ClosedFormEntries) {
  const double sigma = 0.2;
  Eigen::MatrixXd x(2, 2);
  x << 0.1, 0.1 + sigma * std::sqrt(2.0), 0.5, 0.5;
  const GaussianKernel k = gaussian_kernel(PointSet(x), sigma);
  EXPECT_EQ(k.data(0, 0), 1.0);
  EXPECT_NEAR(k.data(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_THROW(gaussian_kernel(PointSet(x), 0.0), ContractViolation);
}

TEST(GaussianKernel, MatchesNaivePairwiseLoop) {
  const Eigen::MatrixXd x = cbtest::random_points(3, 5, 3);
  const GaussianKernel k = gaussian_kernel(PointSet(x), 0.3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a) d2 += (x(a, i) - x(a, j)) * (x(a, i) - x(a, j));
      EXPECT_NEAR(k.data(i, j), std::exp(-d2 / (2 * 0.3 * 0.3)), 1e-14);
    }
}

TEST(GaussianKernel, EntriesInUnitIntervalAndDecreasing) {
  const PointSet pts(cbtest::random_points(40, 6));
  const GaussianKernel k = gaussian_kernel(pts, 0.15);
  EXPECT_GT(k.data.minCoeff(), 0.0);
  EXPECT_LE(k.data.maxCoeff(), 1.0);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j)
      for (int l = 0; l < 40; ++l) {
        const double dj = (pts.point(i) - pts.point(j)).norm();
        const double dl = (pts.point(i) - pts.point(l)).norm();
        if (dj < dl - 1e-12) EXPECT_GT(k.data(i, j), k.data(i, l));
      }
}

TEST(EffectiveBandwidth, FormulaAndMonotonicity) {
  EXPECT_EQ(effective_bandwidth(6.0 / cbtest::kPi, 2), 1u);
  EXPECT_EQ(effective_bandwidth(6.0 / (10.0 * cbtest::kPi), 2), 100u);
  std::size_t prev = effective_bandwidth(0.01, 2);
  for (double s = 0.02; s < 2.0; s += 0.01) {
    const std::size_t cur = effective_bandwidth(s, 2);
    EXPECT_LE(cur, prev);
    prev = cur;
  }
  EXPECT_THROW(effective_bandwidth(-1.0, 2), ContractViolation);
}
