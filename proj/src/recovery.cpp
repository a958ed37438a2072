#include "curveband/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "curveband/errors.hpp"
#include "curveband/lifting.hpp"
#include "curveband/marching_squares.hpp"

namespace curveband {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Spectrum {
  Eigen::MatrixXcd v;          // full right singular vectors
  Eigen::VectorXd singular;    // descending, padded to |support|
};

Spectrum spectrum_of(const PointSet& pts, const FrequencySupport& support) {
  const Eigen::MatrixXcd a = feature_matrix(pts, support).data.transpose();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD of the feature matrix failed");
  Spectrum s;
  s.v = svd.matrixV();
  s.singular = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.size()));
  s.singular.head(svd.singularValues().size()) = svd.singularValues();
  return s;
}

std::size_t count_below(const Eigen::VectorXd& sv, double tau) {
  const double cut = tau * sv(0);
  return static_cast<std::size_t>((sv.array() < cut).count());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

TolerancePolicy TolerancePolicy::rasterized(int grid_res) {
  detail::require(grid_res > 0, "TolerancePolicy::rasterized: grid_res must be positive");
  const double scale = static_cast<double>(kDefaultGridRes) / static_cast<double>(grid_res);
  // About three times the residual floor measured on 5x5 curves at 512.
  return {2e-4 * scale * scale};
}

TrigPolynomial NullspaceBasis::polynomial(std::size_t i) const {
  detail::require(i < dimension(), "NullspaceBasis::polynomial: index out of range");
  return {support, vectors.col(static_cast<Eigen::Index>(i))};
}

Eigen::VectorXcd phase_normalize(const Eigen::VectorXcd& c) {
  const double peak = c.cwiseAbs().maxCoeff();
  if (peak == 0.0) return c;
  Eigen::Index pick = 0;
  while (std::abs(c(pick)) < (1.0 - 1e-8) * peak) ++pick;
  const cdouble phase = std::conj(c(pick)) / std::abs(c(pick));
  Eigen::VectorXcd out = phase * c;
  out(pick) = std::abs(c(pick));
  return out;
}

TrigPolynomial estimate_coefficients(const PointSet& pts, const FrequencySupport& support,
                                     TolerancePolicy tol) {
  detail::require(pts.size() >= 1, "estimate_coefficients: need at least one point");
  detail::require(pts.dim() == 2, "estimate_coefficients: points must be 2-D");
  const Spectrum s = spectrum_of(pts, support);
  const std::size_t null_dim = count_below(s.singular, tol.tau);
  if (null_dim > 1) {
    throw AmbiguousSupport("estimate_coefficients: " + std::to_string(null_dim) +
                               " annihilating vectors at tolerance; support is ambiguous, use "
                               "nullspace_basis",
                           null_dim);
  }
  return {support, phase_normalize(s.v.col(s.v.cols() - 1))};
}

std::vector<FreqIndex> shift_set(const FrequencySupport& gamma, const FrequencySupport& lambda) {
  detail::require(lambda.fits_in(gamma), "shift_set: lambda does not fit inside gamma");
  std::vector<FreqIndex> shifts;
  // Candidate shifts lie in gamma - lambda; keep those for which every corner
  // of the translated rectangle stays inside gamma.
  for (int l1 = gamma.lo1() - lambda.hi1(); l1 <= gamma.hi1() - lambda.lo1(); ++l1) {
    for (int l2 = gamma.lo2() - lambda.hi2(); l2 <= gamma.hi2() - lambda.lo2(); ++l2) {
      const FreqIndex l{l1, l2};
      if (gamma.contains(l + FreqIndex{lambda.lo1(), lambda.lo2()}) &&
          gamma.contains(l + FreqIndex{lambda.hi1(), lambda.hi2()})) {
        shifts.push_back(l);
      }
    }
  }
  return shifts;
}

std::size_t rank_bound(const FrequencySupport& gamma, const FrequencySupport& lambda) {
  return gamma.size() - shift_set(gamma, lambda).size();
}

NullspaceBasis nullspace_basis(const PointSet& pts, const FrequencySupport& gamma, TolerancePolicy tol) {
  detail::require(pts.size() >= 1, "nullspace_basis: need at least one point");
  const Spectrum s = spectrum_of(pts, gamma);
  const auto q = static_cast<Eigen::Index>(count_below(s.singular, tol.tau));
  return {gamma, s.v.rightCols(q), s.singular};
}

SosPolynomial::SosPolynomial(std::vector<TrigPolynomial> terms) : terms_(std::move(terms)) {
  detail::require(!terms_.empty(), "sos_polynomial: basis is empty");
}

double SosPolynomial::operator()(const Vec2& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::norm(evaluate(t, x));
  return sum;
}

Eigen::Vector3d SosPolynomial::value_and_gradient(const Vec2& x) const {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (const auto& t : terms_) {
    const auto vg = evaluate_with_gradient(t, x);
    out(0) += std::norm(vg.value);
    out(1) += 2.0 * (std::conj(vg.value) * vg.d1).real();
    out(2) += 2.0 * (std::conj(vg.value) * vg.d2).real();
  }
  return out;
}

namespace {

Eigen::MatrixXcd exp_table(int n, int lo, int count, bool derivative) {
  Eigen::MatrixXcd e(n, count);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < count; ++a) {
      const long long m = ((static_cast<long long>(lo + a) * i) % n + n) % n;
      e(i, a) = std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(n));
      if (derivative) e(i, a) *= cdouble(0.0, kTwoPi * static_cast<double>(lo + a));
    }
  }
  return e;
}

// Accumulates gamma and, optionally, its gradient over the grid.
void accumulate_grid(const std::vector<TrigPolynomial>& terms, int n1, int n2, Eigen::MatrixXd& value,
                     Eigen::MatrixXd* g1, Eigen::MatrixXd* g2) {
  value = Eigen::MatrixXd::Zero(n1, n2);
  if (g1 != nullptr) *g1 = Eigen::MatrixXd::Zero(n1, n2);
  if (g2 != nullptr) *g2 = Eigen::MatrixXd::Zero(n1, n2);
  const auto& s = terms.front().support();
  const Eigen::MatrixXcd e1 = exp_table(n1, s.lo1(), s.k1(), false);
  const Eigen::MatrixXcd e2 = exp_table(n2, s.lo2(), s.k2(), false);
  Eigen::MatrixXcd w1;
  Eigen::MatrixXcd w2;
  if (g1 != nullptr) {
    w1 = exp_table(n1, s.lo1(), s.k1(), true);
    w2 = exp_table(n2, s.lo2(), s.k2(), true);
  }
  for (const auto& t : terms) {
    detail::require(t.support() == s, "SosPolynomial: terms must share a support");
    Eigen::MatrixXcd c(s.k1(), s.k2());
    for (int a = 0; a < s.k1(); ++a)
      for (int b = 0; b < s.k2(); ++b) c(a, b) = t.coeffs()(a * s.k2() + b);
    const Eigen::MatrixXcd left = e1 * c;
    const Eigen::MatrixXcd mu = left * e2.transpose();
    value += mu.cwiseAbs2();
    if (g1 != nullptr) {
      const Eigen::MatrixXcd d1 = (w1 * c) * e2.transpose();
      const Eigen::MatrixXcd d2 = left * w2.transpose();
      *g1 += 2.0 * (mu.conjugate().cwiseProduct(d1)).real();
      *g2 += 2.0 * (mu.conjugate().cwiseProduct(d2)).real();
    }
  }
}

double proxy(double value, double g1, double g2) {
  const double g = std::hypot(g1, g2);
  if (value <= 0.0) return 0.0;
  if (g == 0.0) return std::numeric_limits<double>::max();
  return 2.0 * value / g;
}

}  // namespace

Eigen::MatrixXd SosPolynomial::evaluate_grid(int n1, int n2) const {
  Eigen::MatrixXd v;
  accumulate_grid(terms_, n1, n2, v, nullptr, nullptr);
  return v;
}

Eigen::MatrixXd SosPolynomial::distance_proxy_grid(int n1, int n2) const {
  Eigen::MatrixXd v;
  Eigen::MatrixXd g1;
  Eigen::MatrixXd g2;
  accumulate_grid(terms_, n1, n2, v, &g1, &g2);
  Eigen::MatrixXd d(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) d(i, j) = proxy(v(i, j), g1(i, j), g2(i, j));
  return d;
}

double SosPolynomial::distance_proxy(const Vec2& x) const {
  const Eigen::Vector3d vg = value_and_gradient(x);
  return proxy(vg(0), vg(1), vg(2));
}

SosPolynomial sos_polynomial(const NullspaceBasis& basis) {
  detail::require(basis.dimension() >= 1, "sos_polynomial: basis is empty");
  std::vector<TrigPolynomial> terms;
  terms.reserve(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) terms.push_back(basis.polynomial(i));
  return SosPolynomial(std::move(terms));
}

Polyline sos_contour(const SosPolynomial& sos, const PointSet& samples, int n1, int n2) {
  std::vector<double> at_samples;
  at_samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) at_samples.push_back(sos.distance_proxy(samples.point2(i)));
  // The valley must be wide enough for the grid to resolve it.
  const double cell = 1.0 / static_cast<double>(std::min(n1, n2));
  const double level = std::max(3.0 * median(std::move(at_samples)), cell);
  return contour_periodic(-sos.distance_proxy_grid(n1, n2), -level);
}

Polyline recover_curve(const PointSet& pts, const FrequencySupport& gamma, int grid_res, TolerancePolicy tol) {
  detail::require(pts.size() >= 1, "recover_curve: need at least one point");
  detail::require(grid_res >= 16, "recover_curve: grid_res must be at least 16");
  const Spectrum s = spectrum_of(pts, gamma);
  const auto q = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(count_below(s.singular, tol.tau)));
  if (q == 1 && gamma.symmetric()) {
    double defect = 0.0;
    const TrigPolynomial real_poly = align_hermitian({gamma, s.v.col(s.v.cols() - 1)}, &defect);
    if (defect < 1e-2) return extract_zero_level_set(real_poly, grid_res);
  }
  std::vector<TrigPolynomial> terms;
  for (Eigen::Index i = s.v.cols() - q; i < s.v.cols(); ++i) terms.emplace_back(gamma, s.v.col(i));
  return sos_contour(SosPolynomial(std::move(terms)), pts, grid_res, grid_res);
}

TorusNearest::TorusNearest(const std::vector<Vec2>& points) {
  detail::require(!points.empty(), "TorusNearest: point set is empty");
  cells_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(points.size()) / 2.0)), 1, 512);
  buckets_.resize(static_cast<std::size_t>(cells_) * static_cast<std::size_t>(cells_));
  for (const auto& p : points) {
    const Vec2 w = wrap_unit(p);
    buckets_[static_cast<std::size_t>(bucket_of(w.x()) * cells_ + bucket_of(w.y()))].push_back(w);
  }
}

int TorusNearest::bucket_of(double v) const {
  return std::min(cells_ - 1, static_cast<int>(v * static_cast<double>(cells_)));
}

double TorusNearest::distance(const Vec2& q) const {
  const Vec2 w = wrap_unit(q);
  const int ci = bucket_of(w.x());
  const int cj = bucket_of(w.y());
  const double cell = 1.0 / static_cast<double>(cells_);
  double best = std::numeric_limits<double>::infinity();
  const int max_ring = cells_ / 2 + 1;
  for (int r = 0; r <= max_ring; ++r) {
    for (int di = -r; di <= r; ++di) {
      for (int dj = -r; dj <= r; ++dj) {
        if (std::max(std::abs(di), std::abs(dj)) != r) continue;
        const int bi = ((ci + di) % cells_ + cells_) % cells_;
        const int bj = ((cj + dj) % cells_ + cells_) % cells_;
        for (const auto& p : buckets_[static_cast<std::size_t>(bi * cells_ + bj)]) {
          best = std::min(best, torus_distance(w, p));
        }
      }
    }
    // Anything in ring r+1 or beyond is at least r cells away.
    if (best <= static_cast<double>(r) * cell) break;
  }
  return best;
}

double chamfer_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  detail::require(!a.empty() && !b.empty(), "chamfer_distance: inputs must be non-empty");
  const TorusNearest near_a(a);
  const TorusNearest near_b(b);
  double sum_ab = 0.0;
  for (const auto& p : a) sum_ab += near_b.distance(p);
  double sum_ba = 0.0;
  for (const auto& p : b) sum_ba += near_a.distance(p);
  return 0.5 * (sum_ab / static_cast<double>(a.size()) + sum_ba / static_cast<double>(b.size()));
}

double chamfer_distance(const Polyline& a, const Polyline& b) {
  return chamfer_distance(a.vertices(), b.vertices());
}

}  // namespace curveband
