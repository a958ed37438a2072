#pragma once

#include <cstddef>
#include <vector>

#include "curveband/geometry.hpp"

namespace curveband {

/// One ordered vertex chain in [0,1)^2. Consecutive vertices may straddle the
/// periodic boundary; segments always follow the minimal-image displacement.
struct PolylineComponent {
  std::vector<Vec2> vertices;
  bool closed = true;

  std::size_t segment_count() const noexcept {
    if (vertices.size() < 2) return 0;
    return closed ? vertices.size() : vertices.size() - 1;
  }
  double length() const;
};

/// Discretization of a curve as a list of components.
struct Polyline {
  std::vector<PolylineComponent> components;

  bool empty() const noexcept { return vertex_count() == 0; }
  std::size_t vertex_count() const noexcept;
  double length() const;
  std::vector<Vec2> vertices() const;
};

}  // namespace curveband
