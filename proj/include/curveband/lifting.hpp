#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "curveband/frequency_support.hpp"
#include "curveband/point_set.hpp"
#include "curveband/trig_polynomial.hpp"

namespace curveband {

/// |support| x N matrix whose column i is the feature map of point i.
struct FeatureMatrix {
  FrequencySupport support;
  Eigen::MatrixXcd data;
};

/// K(i,j) = phi(x_i)^H phi(x_j), a product of 1-D Dirichlet kernels.
struct DirichletGram {
  FrequencySupport support;
  Eigen::MatrixXcd data;
};

/// K(i,j) = exp(-|x_i - x_j|^2 / (2 sigma^2)).
struct GaussianKernel {
  double sigma;
  Eigen::MatrixXd data;
};

/// exp(j 2 pi k.x) for every k in the support, in enumeration order.
Eigen::VectorXcd feature_map(const Vec2& x, const FrequencySupport& support);

FeatureMatrix feature_matrix(const PointSet& pts, const FrequencySupport& support);

DirichletGram dirichlet_gram(const PointSet& pts, const FrequencySupport& support);

/// sum_{k=lo}^{lo+count-1} exp(j 2 pi k t) in closed form, with direct
/// summation when sin(pi t) is tiny.
cdouble dirichlet_kernel_1d(double t, int lo, int count);

GaussianKernel gaussian_kernel(const PointSet& pts, double sigma);

/// Number of Fourier coefficients that matter for a Gaussian of width sigma
/// in n dimensions: round((6 / (pi sigma))^n).
std::size_t effective_bandwidth(double sigma, int n);

}  // namespace curveband
