#include "curveband/lifting.hpp"

#include <cmath>
#include <numbers>

#include "curveband/errors.hpp"

namespace curveband {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::VectorXcd feature_map(const Vec2& x, const FrequencySupport& support) {
  Eigen::VectorXcd phi(static_cast<Eigen::Index>(support.size()));
  for (std::size_t f = 0; f < support.size(); ++f) {
    const FreqIndex k = support.index(f);
    phi(static_cast<Eigen::Index>(f)) =
        std::polar(1.0, 2.0 * kPi * (static_cast<double>(k.k1) * x.x() + static_cast<double>(k.k2) * x.y()));
  }
  return phi;
}

FeatureMatrix feature_matrix(const PointSet& pts, const FrequencySupport& support) {
  detail::require(pts.dim() == 2, "feature_matrix: points must be 2-D");
  FeatureMatrix fm{support, Eigen::MatrixXcd(static_cast<Eigen::Index>(support.size()),
                                             static_cast<Eigen::Index>(pts.size()))};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    fm.data.col(static_cast<Eigen::Index>(i)) = feature_map(pts.point2(i), support);
  }
  return fm;
}

cdouble dirichlet_kernel_1d(double t, int lo, int count) {
  const double s = std::sin(kPi * t);
  if (std::abs(s) < 1e-9) {
    cdouble sum(0.0, 0.0);
    for (int a = 0; a < count; ++a) sum += std::polar(1.0, 2.0 * kPi * static_cast<double>(lo + a) * t);
    return sum;
  }
  // Geometric series centred on the midpoint of the index range.
  const double mid = static_cast<double>(lo) + 0.5 * static_cast<double>(count - 1);
  return (std::sin(kPi * static_cast<double>(count) * t) / s) * std::polar(1.0, 2.0 * kPi * mid * t);
}

DirichletGram dirichlet_gram(const PointSet& pts, const FrequencySupport& support) {
  detail::require(pts.dim() == 2, "dirichlet_gram: points must be 2-D");
  const auto n = static_cast<Eigen::Index>(pts.size());
  DirichletGram g{support, Eigen::MatrixXcd(n, n)};
  const cdouble diag(static_cast<double>(support.size()), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    g.data(i, i) = diag;
    const Vec2 xi = pts.point2(static_cast<std::size_t>(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Vec2 d = pts.point2(static_cast<std::size_t>(j)) - xi;
      const cdouble v = dirichlet_kernel_1d(d.x(), support.lo1(), support.k1()) *
                        dirichlet_kernel_1d(d.y(), support.lo2(), support.k2());
      g.data(i, j) = v;
      g.data(j, i) = std::conj(v);
    }
  }
  return g;
}

GaussianKernel gaussian_kernel(const PointSet& pts, double sigma) {
  detail::require(sigma > 0.0, "gaussian_kernel: sigma must be positive");
  const auto n = static_cast<Eigen::Index>(pts.size());
  const Eigen::MatrixXd& x = pts.coords();
  GaussianKernel k{sigma, Eigen::MatrixXd(n, n)};
  const double scale = -1.0 / (2.0 * sigma * sigma);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.data(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(scale * (x.col(i) - x.col(j)).squaredNorm());
      k.data(i, j) = v;
      k.data(j, i) = v;
    }
  }
  return k;
}

std::size_t effective_bandwidth(double sigma, int n) {
  detail::require(sigma > 0.0, "effective_bandwidth: sigma must be positive");
  detail::require(n > 0, "effective_bandwidth: dimension must be positive");
  return static_cast<std::size_t>(std::llround(std::pow(6.0 / (kPi * sigma), n)));
}

}  // namespace curveband
