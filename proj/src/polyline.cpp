#include "curveband/polyline.hpp"

namespace curveband {

double PolylineComponent::length() const {
  double total = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t s = 0; s < segment_count(); ++s) {
    total += torus_distance(vertices[s], vertices[(s + 1) % n]);
  }
  return total;
}

std::size_t Polyline::vertex_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : components) n += c.vertices.size();
  return n;
}

double Polyline::length() const {
  double total = 0.0;
  for (const auto& c : components) total += c.length();
  return total;
}

std::vector<Vec2> Polyline::vertices() const {
  std::vector<Vec2> out;
  out.reserve(vertex_count());
  for (const auto& c : components) out.insert(out.end(), c.vertices.begin(), c.vertices.end());
  return out;
}

}  // namespace curveband
