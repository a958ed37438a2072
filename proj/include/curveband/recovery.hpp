#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "curveband/curve_model.hpp"
#include "curveband/frequency_support.hpp"
#include "curveband/point_set.hpp"
#include "curveband/polyline.hpp"
#include "curveband/trig_polynomial.hpp"

namespace curveband {

/// Singular values below tau * sigma_max count as zero.
struct TolerancePolicy {
  double tau = 1e-6;

  /// For points that are exact zeros of the curve.
  static TolerancePolicy analytic() { return {1e-6}; }
  /// For points taken from a marching-squares polyline at `grid_res`. The
  /// interpolation residual shrinks like 1/grid_res^2; tau = 2e-4 at 512.
  static TolerancePolicy rasterized(int grid_res = kDefaultGridRes);
};

/// Orthonormal basis (columns) of the annihilating polynomials of a point set.
struct NullspaceBasis {
  FrequencySupport support;
  Eigen::MatrixXcd vectors;
  /// Full spectrum of the transposed feature matrix, descending, zero-padded
  /// to |support| entries when there are fewer points than coefficients.
  Eigen::VectorXd singular_values;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(vectors.cols()); }
  std::size_t rank() const noexcept { return support.size() - dimension(); }
  TrigPolynomial polynomial(std::size_t i) const;
};

/// Unit-norm c minimizing sum_i |psi(x_i)|^2 (smallest right singular vector
/// of the transposed feature matrix), phase-normalized so that its first
/// largest-magnitude coefficient is real positive. Throws AmbiguousSupport
/// when more than one singular value falls below the tolerance.
TrigPolynomial estimate_coefficients(const PointSet& pts, const FrequencySupport& support,
                                     TolerancePolicy tol = TolerancePolicy::analytic());

/// Rotates c by a unit phase so its first largest-magnitude entry is real positive.
Eigen::VectorXcd phase_normalize(const Eigen::VectorXcd& c);

/// Shifts l with l + lambda contained in gamma, row-major.
std::vector<FreqIndex> shift_set(const FrequencySupport& gamma, const FrequencySupport& lambda);

/// |gamma| - |gamma : lambda|.
std::size_t rank_bound(const FrequencySupport& gamma, const FrequencySupport& lambda);

NullspaceBasis nullspace_basis(const PointSet& pts, const FrequencySupport& gamma,
                               TolerancePolicy tol = TolerancePolicy::rasterized());

/// gamma(x) = sum_i |mu_i(x)|^2 over a null-space basis.
class SosPolynomial {
 public:
  explicit SosPolynomial(std::vector<TrigPolynomial> terms);

  double operator()(const Vec2& x) const;
  /// Value and gradient (d/dx1, d/dx2).
  Eigen::Vector3d value_and_gradient(const Vec2& x) const;
  /// Values on the periodic n1 x n2 grid, (i, j) at x = (i/n1, j/n2).
  Eigen::MatrixXd evaluate_grid(int n1, int n2) const;
  /// The distance proxy 2 gamma / |grad gamma| on the grid. Near a simple
  /// zero curve this approximates the Euclidean distance to it.
  Eigen::MatrixXd distance_proxy_grid(int n1, int n2) const;
  double distance_proxy(const Vec2& x) const;

  std::size_t term_count() const noexcept { return terms_.size(); }

 private:
  std::vector<TrigPolynomial> terms_;
};

SosPolynomial sos_polynomial(const NullspaceBasis& basis);

/// Curve through the samples with an over-estimated support. When only one
/// annihilator is found its zero contour is returned directly; otherwise the
/// valley of the sum-of-squares polynomial is contoured.
Polyline recover_curve(const PointSet& pts, const FrequencySupport& gamma, int grid_res = kDefaultGridRes,
                       TolerancePolicy tol = TolerancePolicy::rasterized());

/// Contour of the sum-of-squares valley at an automatically chosen offset.
Polyline sos_contour(const SosPolynomial& sos, const PointSet& samples, int n1, int n2);

/// Symmetric mean of nearest-vertex distances on the unit torus:
/// (mean_a d(a, B) + mean_b d(b, A)) / 2.
double chamfer_distance(const Polyline& a, const Polyline& b);
double chamfer_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Nearest-neighbour queries on the unit torus via a uniform bucket grid.
class TorusNearest {
 public:
  explicit TorusNearest(const std::vector<Vec2>& points);
  /// Distance from q to the closest stored point.
  double distance(const Vec2& q) const;

 private:
  int cells_;
  std::vector<std::vector<Vec2>> buckets_;
  int bucket_of(double v) const;
};

}  // namespace curveband
