#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include <Eigen/Core>

#include "curveband/frequency_support.hpp"
#include "curveband/point_set.hpp"
#include "curveband/polyline.hpp"
#include "curveband/trig_polynomial.hpp"

namespace curveband {

inline constexpr int kDefaultGridRes = 512;

/// psi at every point. Points must be 2-D.
Eigen::VectorXcd evaluate(const TrigPolynomial& poly, const PointSet& pts);
cdouble evaluate(const TrigPolynomial& poly, const Vec2& x);

struct ValueAndGradient {
  cdouble value;
  cdouble d1;
  cdouble d2;
};
ValueAndGradient evaluate_with_gradient(const TrigPolynomial& poly, const Vec2& x);

/// psi on the periodic n1 x n2 grid, entry (i, j) at x = (i/n1, j/n2).
Eigen::MatrixXcd evaluate_grid(const TrigPolynomial& poly, int n1, int n2);

/// Coefficient convolution; the product's support is (k1a+k1b-1) x (k2a+k2b-1).
TrigPolynomial multiply(const TrigPolynomial& a, const TrigPolynomial& b);

/// Zero contour of Re(psi) on a grid_res x grid_res periodic grid.
Polyline extract_zero_level_set(const TrigPolynomial& poly, int grid_res = kDefaultGridRes);

/// Axis-aligned rectangle [x1_min, x1_max) x [x2_min, x2_max).
struct Region {
  double x1_min = 0.0;
  double x2_min = 0.0;
  double x1_max = 1.0;
  double x2_max = 1.0;
};

struct UniformArclength {};
struct RestrictedToRegion {
  Region region;
};
using SamplingStrategy = std::variant<UniformArclength, RestrictedToRegion>;

/// Draws n points uniformly with respect to arc length, optionally only from
/// the part of the curve inside a region. Deterministic given the seed.
PointSet sample_curve(const Polyline& curve, std::size_t n, const SamplingStrategy& strategy,
                      std::uint64_t seed);

/// Region [0, s) x [0, 1) where s splits the curve's arc length in half.
Region left_half_region(const Polyline& curve);

/// Hermitian polynomial with i.i.d. standard normal coefficients on the
/// half grid, mirrored, then scaled to unit l2 norm. Odd sizes only.
TrigPolynomial random_curve(const FrequencySupport& support, std::uint64_t seed);

/// Newton-projects each point onto the zero set of psi.
PointSet project_to_zero_set(const TrigPolynomial& poly, const PointSet& pts, int iterations = 8);

/// Multiplies by the unit phase that brings c closest to hermitian symmetry
/// and symmetrizes. Returns the phase-aligned coefficients flagged hermitian.
/// `defect` receives the relative distance from hermitian before symmetrizing.
TrigPolynomial align_hermitian(const TrigPolynomial& poly, double* defect = nullptr);

}  // namespace curveband
