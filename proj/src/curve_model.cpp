#include "curveband/curve_model.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "curveband/errors.hpp"
#include "curveband/marching_squares.hpp"

namespace curveband {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(j 2 pi k t) for k = lo..lo+count-1.
Eigen::VectorXcd axis_exponentials(double t, int lo, int count) {
  Eigen::VectorXcd e(count);
  for (int a = 0; a < count; ++a) e(a) = std::polar(1.0, kTwoPi * static_cast<double>(lo + a) * t);
  return e;
}

// n x count table of exp(j 2 pi k i / n) with exact reduction of k*i mod n.
Eigen::MatrixXcd grid_exponentials(int n, int lo, int count) {
  Eigen::MatrixXcd e(n, count);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < count; ++a) {
      const long long m = ((static_cast<long long>(lo + a) * i) % n + n) % n;
      e(i, a) = std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(n));
    }
  }
  return e;
}

// Coefficients as a k1 x k2 matrix (row = k1 index).
Eigen::MatrixXcd coeff_matrix(const TrigPolynomial& poly) {
  const auto& s = poly.support();
  Eigen::MatrixXcd c(s.k1(), s.k2());
  for (int i = 0; i < s.k1(); ++i)
    for (int j = 0; j < s.k2(); ++j) c(i, j) = poly.coeffs()(i * s.k2() + j);
  return c;
}

}  // namespace

cdouble evaluate(const TrigPolynomial& poly, const Vec2& x) {
  const auto& s = poly.support();
  const Eigen::VectorXcd e1 = axis_exponentials(x.x(), s.lo1(), s.k1());
  const Eigen::VectorXcd e2 = axis_exponentials(x.y(), s.lo2(), s.k2());
  return e1.transpose() * coeff_matrix(poly) * e2;
}

Eigen::VectorXcd evaluate(const TrigPolynomial& poly, const PointSet& pts) {
  detail::require(pts.dim() == 2, "evaluate: points must be 2-D");
  const auto& s = poly.support();
  const Eigen::MatrixXcd c = coeff_matrix(poly);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 x = pts.point2(i);
    const Eigen::VectorXcd e1 = axis_exponentials(x.x(), s.lo1(), s.k1());
    const Eigen::VectorXcd e2 = axis_exponentials(x.y(), s.lo2(), s.k2());
    out(static_cast<Eigen::Index>(i)) = e1.transpose() * c * e2;
  }
  return out;
}

ValueAndGradient evaluate_with_gradient(const TrigPolynomial& poly, const Vec2& x) {
  const auto& s = poly.support();
  const Eigen::VectorXcd e1 = axis_exponentials(x.x(), s.lo1(), s.k1());
  const Eigen::VectorXcd e2 = axis_exponentials(x.y(), s.lo2(), s.k2());
  Eigen::VectorXcd w1(s.k1());
  Eigen::VectorXcd w2(s.k2());
  const cdouble j2pi(0.0, kTwoPi);
  for (int a = 0; a < s.k1(); ++a) w1(a) = j2pi * static_cast<double>(s.lo1() + a) * e1(a);
  for (int b = 0; b < s.k2(); ++b) w2(b) = j2pi * static_cast<double>(s.lo2() + b) * e2(b);
  const Eigen::MatrixXcd c = coeff_matrix(poly);
  return {e1.transpose() * c * e2, w1.transpose() * c * e2, e1.transpose() * c * w2};
}

Eigen::MatrixXcd evaluate_grid(const TrigPolynomial& poly, int n1, int n2) {
  detail::require(n1 > 0 && n2 > 0, "evaluate_grid: grid sizes must be positive");
  const auto& s = poly.support();
  const Eigen::MatrixXcd e1 = grid_exponentials(n1, s.lo1(), s.k1());
  const Eigen::MatrixXcd e2 = grid_exponentials(n2, s.lo2(), s.k2());
  return e1 * coeff_matrix(poly) * e2.transpose();
}

TrigPolynomial multiply(const TrigPolynomial& a, const TrigPolynomial& b) {
  detail::require(!a.is_zero() && !b.is_zero(), "multiply: operands must be nonzero");
  const auto& sa = a.support();
  const auto& sb = b.support();
  const FrequencySupport sp(sa.k1() + sb.k1() - 1, sa.k2() + sb.k2() - 1);
  detail::require(sa.lo1() + sb.lo1() == sp.lo1() && sa.lo2() + sb.lo2() == sp.lo2(),
                  "multiply: product of two even-sized axes is not centred");

  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sp.size()));
  for (std::size_t fa = 0; fa < sa.size(); ++fa) {
    const cdouble ca = a.coeffs()(static_cast<Eigen::Index>(fa));
    if (ca == 0.0) continue;
    const FreqIndex ka = sa.index(fa);
    for (std::size_t fb = 0; fb < sb.size(); ++fb) {
      c(static_cast<Eigen::Index>(sp.flat(ka + sb.index(fb)))) +=
          ca * b.coeffs()(static_cast<Eigen::Index>(fb));
    }
  }
  const bool herm = a.hermitian() && b.hermitian();
  if (herm) {
    // Remove rounding asymmetry so the flag's invariant holds exactly.
    Eigen::VectorXcd h(c.size());
    for (std::size_t f = 0; f < sp.size(); ++f) {
      const auto mirror = static_cast<Eigen::Index>(sp.flat(-sp.index(f)));
      h(static_cast<Eigen::Index>(f)) = 0.5 * (c(static_cast<Eigen::Index>(f)) + std::conj(c(mirror)));
    }
    c = h;
  }
  return {sp, c, herm};
}

Polyline extract_zero_level_set(const TrigPolynomial& poly, int grid_res) {
  detail::require(poly.hermitian(), "extract_zero_level_set: polynomial must be hermitian");
  detail::require(grid_res >= 16, "extract_zero_level_set: grid_res must be at least 16");
  const Eigen::MatrixXd values = evaluate_grid(poly, grid_res, grid_res).real();
  return contour_periodic(values, 0.0);
}

namespace {

struct Segment {
  Vec2 start;
  Vec2 delta;
};

std::vector<Segment> segments_of(const Polyline& curve) {
  std::vector<Segment> segs;
  for (const auto& comp : curve.components) {
    const std::size_t n = comp.vertices.size();
    for (std::size_t s = 0; s < comp.segment_count(); ++s) {
      const Vec2& a = comp.vertices[s];
      segs.push_back({a, wrap_delta(Vec2(comp.vertices[(s + 1) % n] - a))});
    }
  }
  return segs;
}

// Parameter interval of p + t d, t in [0,1], inside [lo, hi) (Liang-Barsky).
bool clip(const Segment& seg, const Vec2& lo, const Vec2& hi, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    const double p = seg.start(axis);
    const double d = seg.delta(axis);
    if (d == 0.0) {
      if (p < lo(axis) || p >= hi(axis)) return false;
      continue;
    }
    double ta = (lo(axis) - p) / d;
    double tb = (hi(axis) - p) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 >= t1) return false;
  }
  return true;
}

struct Piece {
  Vec2 start;
  Vec2 delta;
  double length;
};

PointSet draw(const std::vector<Piece>& pieces, std::size_t n, std::uint64_t seed) {
  std::vector<double> cumulative;
  cumulative.reserve(pieces.size());
  double total = 0.0;
  for (const auto& p : pieces) {
    total += p.length;
    cumulative.push_back(total);
  }
  if (total <= 0.0) throw NoSamplesAvailable("sample_curve: no samples available in the requested region");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, total);
  Eigen::MatrixXd coords(2, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double s = u(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    if (it == cumulative.end()) --it;
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const Piece& p = pieces[idx];
    const double before = *it - p.length;
    const double t = p.length > 0.0 ? std::clamp((s - before) / p.length, 0.0, 1.0) : 0.0;
    const Vec2 x = wrap_unit(Vec2(p.start + t * p.delta));
    coords.col(static_cast<Eigen::Index>(i)) = x;
  }
  return PointSet(std::move(coords));
}

}  // namespace

PointSet sample_curve(const Polyline& curve, std::size_t n, const SamplingStrategy& strategy,
                      std::uint64_t seed) {
  if (n == 0) return PointSet(2);
  detail::require(!curve.empty(), "sample_curve: curve is empty");

  std::vector<Piece> pieces;
  const auto segs = segments_of(curve);
  if (std::holds_alternative<UniformArclength>(strategy)) {
    for (const auto& s : segs) pieces.push_back({s.start, s.delta, s.delta.norm()});
  } else {
    const Region r = std::get<RestrictedToRegion>(strategy).region;
    for (const auto& s : segs) {
      for (int sx = -1; sx <= 1; ++sx) {
        for (int sy = -1; sy <= 1; ++sy) {
          const Vec2 shift(sx, sy);
          double t0 = 0.0;
          double t1 = 0.0;
          if (!clip(s, Vec2(r.x1_min, r.x2_min) + shift, Vec2(r.x1_max, r.x2_max) + shift, t0, t1)) {
            continue;
          }
          const Vec2 d = (t1 - t0) * s.delta;
          pieces.push_back({s.start + t0 * s.delta, d, d.norm()});
        }
      }
    }
  }
  return draw(pieces, n, seed);
}

Region left_half_region(const Polyline& curve) {
  detail::require(!curve.empty(), "left_half_region: curve is empty");
  std::vector<std::pair<double, double>> mids;  // (x1 of midpoint, length)
  double total = 0.0;
  for (const auto& s : segments_of(curve)) {
    const double len = s.delta.norm();
    mids.emplace_back(wrap_unit(s.start.x() + 0.5 * s.delta.x()), len);
    total += len;
  }
  std::sort(mids.begin(), mids.end());
  double acc = 0.0;
  double split = 1.0;
  for (const auto& [x1, len] : mids) {
    acc += len;
    if (acc >= 0.5 * total) {
      split = x1;
      break;
    }
  }
  return {0.0, 0.0, split, 1.0};
}

TrigPolynomial random_curve(const FrequencySupport& support, std::uint64_t seed) {
  detail::require(support.symmetric(), "random_curve: support sizes must be odd");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(support.size()));
  for (std::size_t f = 0; f < support.size(); ++f) {
    const FreqIndex k = support.index(f);
    const bool positive = k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
    if (k == FreqIndex{0, 0}) {
      c(static_cast<Eigen::Index>(f)) = normal(rng);
    } else if (positive) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(static_cast<Eigen::Index>(f)) = {re, im};
      c(static_cast<Eigen::Index>(support.flat(-k))) = {re, -im};
    }
  }
  c /= c.norm();
  return {support, c, true};
}

PointSet project_to_zero_set(const TrigPolynomial& poly, const PointSet& pts, int iterations) {
  detail::require(pts.dim() == 2, "project_to_zero_set: points must be 2-D");
  Eigen::MatrixXd out(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 x = pts.point2(i);
    for (int it = 0; it < iterations; ++it) {
      const auto vg = evaluate_with_gradient(poly, x);
      Eigen::Matrix2d jac;
      jac << vg.d1.real(), vg.d2.real(), vg.d1.imag(), vg.d2.imag();
      const Eigen::Vector2d r(vg.value.real(), vg.value.imag());
      const Eigen::Vector2d step =
          Eigen::JacobiSVD<Eigen::Matrix2d>(jac, Eigen::ComputeFullU | Eigen::ComputeFullV).solve(r);
      if (!step.allFinite()) break;
      x -= step;
      if (step.norm() < 1e-16) break;
    }
    out.col(static_cast<Eigen::Index>(i)) = wrap_unit(x);
  }
  return PointSet(std::move(out));
}

TrigPolynomial align_hermitian(const TrigPolynomial& poly, double* defect) {
  const auto& s = poly.support();
  detail::require(s.symmetric(), "align_hermitian: support sizes must be odd");
  const Eigen::VectorXcd& c = poly.coeffs();
  cdouble pair_sum(0.0, 0.0);
  for (std::size_t f = 0; f < s.size(); ++f) {
    pair_sum += c(static_cast<Eigen::Index>(f)) * c(static_cast<Eigen::Index>(s.flat(-s.index(f))));
  }
  cdouble phase(1.0, 0.0);
  if (std::abs(pair_sum) > 0.0) phase = std::sqrt(std::conj(pair_sum) / std::abs(pair_sum));
  const Eigen::VectorXcd rotated = phase * c;
  Eigen::VectorXcd h(rotated.size());
  for (std::size_t f = 0; f < s.size(); ++f) {
    const auto mirror = static_cast<Eigen::Index>(s.flat(-s.index(f)));
    h(static_cast<Eigen::Index>(f)) =
        0.5 * (rotated(static_cast<Eigen::Index>(f)) + std::conj(rotated(mirror)));
  }
  if (defect != nullptr) {
    const double norm = rotated.norm();
    *defect = norm > 0.0 ? (rotated - h).norm() / norm : 0.0;
  }
  return {s, h, true};
}

}  // namespace curveband
