#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace curveband {

using Vec2 = Eigen::Vector2d;

/// Minimal-image displacement on the unit torus, in [-0.5, 0.5].
inline double wrap_delta(double d) { return d - std::round(d); }

/// Maps a coordinate into [0, 1).
inline double wrap_unit(double v) {
  double w = v - std::floor(v);
  return w >= 1.0 ? 0.0 : w;
}

inline Vec2 wrap_delta(const Vec2& d) { return {wrap_delta(d.x()), wrap_delta(d.y())}; }
inline Vec2 wrap_unit(const Vec2& p) { return {wrap_unit(p.x()), wrap_unit(p.y())}; }

inline double torus_distance(const Vec2& a, const Vec2& b) {
  return wrap_delta(Vec2(b - a)).norm();
}

}  // namespace curveband
