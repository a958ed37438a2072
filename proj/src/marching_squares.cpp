#include "curveband/marching_squares.hpp"

#include <array>
#include <cstdint>

#include "curveband/errors.hpp"

namespace curveband {

namespace {

// Edge ids: 2*(i*n2 + j) is the x1-directed edge from node (i,j) to (i+1,j);
// 2*(i*n2 + j) + 1 is the x2-directed edge from (i,j) to (i,j+1).
struct Grid {
  const Eigen::MatrixXd& v;
  Eigen::Index n1;
  Eigen::Index n2;
  double level;

  double at(Eigen::Index i, Eigen::Index j) const { return v((i + n1) % n1, (j + n2) % n2); }
  std::int64_t node(Eigen::Index i, Eigen::Index j) const {
    return static_cast<std::int64_t>((i % n1) * n2 + (j % n2));
  }
  std::int64_t edge1(Eigen::Index i, Eigen::Index j) const { return 2 * node(i, j); }
  std::int64_t edge2(Eigen::Index i, Eigen::Index j) const { return 2 * node(i, j) + 1; }

  Vec2 crossing(std::int64_t edge) const {
    const std::int64_t nd = edge / 2;
    const Eigen::Index i = static_cast<Eigen::Index>(nd / n2);
    const Eigen::Index j = static_cast<Eigen::Index>(nd % n2);
    const double a = at(i, j);
    if (edge % 2 == 0) {
      const double b = at(i + 1, j);
      const double t = (level - a) / (b - a);
      return wrap_unit(Vec2((static_cast<double>(i) + t) / static_cast<double>(n1),
                            static_cast<double>(j) / static_cast<double>(n2)));
    }
    const double b = at(i, j + 1);
    const double t = (level - a) / (b - a);
    return wrap_unit(Vec2(static_cast<double>(i) / static_cast<double>(n1),
                          (static_cast<double>(j) + t) / static_cast<double>(n2)));
  }
};

constexpr std::int64_t kNone = -1;

void link(std::vector<std::array<std::int64_t, 2>>& adj, std::int64_t a, std::int64_t b) {
  auto put = [&](std::int64_t from, std::int64_t to) {
    auto& slot = adj[static_cast<std::size_t>(from)];
    if (slot[0] == kNone) {
      slot[0] = to;
    } else {
      slot[1] = to;
    }
  };
  put(a, b);
  put(b, a);
}

}  // namespace

Polyline contour_periodic(const Eigen::MatrixXd& values, double level) {
  detail::require(values.rows() >= 2 && values.cols() >= 2,
                  "contour_periodic: grid must be at least 2x2");
  detail::require(values.allFinite(), "contour_periodic: grid values must be finite");

  const Grid g{values, values.rows(), values.cols(), level};
  const std::size_t n_edges = static_cast<std::size_t>(2 * g.n1 * g.n2);
  std::vector<std::array<std::int64_t, 2>> adj(n_edges, {kNone, kNone});

  for (Eigen::Index i = 0; i < g.n1; ++i) {
    for (Eigen::Index j = 0; j < g.n2; ++j) {
      const double v00 = g.at(i, j);
      const double v10 = g.at(i + 1, j);
      const double v11 = g.at(i + 1, j + 1);
      const double v01 = g.at(i, j + 1);
      const int code = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) | (v11 > level ? 4 : 0) |
                       (v01 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;

      const std::int64_t bottom = g.edge1(i, j);
      const std::int64_t top = g.edge1(i, j + 1);
      const std::int64_t left = g.edge2(i, j);
      const std::int64_t right = g.edge2(i + 1, j);

      if (code == 5 || code == 10) {
        const bool centre_in = 0.25 * (v00 + v10 + v11 + v01) > level;
        // Separate the corners whose state differs from the centre.
        const bool cut_00_and_11 = (code == 5) != centre_in;
        if (cut_00_and_11) {
          link(adj, bottom, left);
          link(adj, right, top);
        } else {
          link(adj, bottom, right);
          link(adj, top, left);
        }
        continue;
      }

      std::array<std::int64_t, 2> hit{};
      int n = 0;
      if ((v00 > level) != (v10 > level)) hit[n++] = bottom;
      if ((v10 > level) != (v11 > level)) hit[n++] = right;
      if ((v01 > level) != (v11 > level)) hit[n++] = top;
      if ((v00 > level) != (v01 > level)) hit[n++] = left;
      link(adj, hit[0], hit[1]);
    }
  }

  Polyline out;
  std::vector<bool> visited(n_edges, false);
  for (std::size_t start = 0; start < n_edges; ++start) {
    if (adj[start][0] == kNone || visited[start]) continue;
    PolylineComponent comp;
    std::int64_t prev = kNone;
    std::int64_t cur = static_cast<std::int64_t>(start);
    while (cur != kNone && !visited[static_cast<std::size_t>(cur)]) {
      visited[static_cast<std::size_t>(cur)] = true;
      const Vec2 p = g.crossing(cur);
      if (comp.vertices.empty() || torus_distance(comp.vertices.back(), p) > 0.0) {
        comp.vertices.push_back(p);
      }
      const auto& nb = adj[static_cast<std::size_t>(cur)];
      const std::int64_t next = (nb[0] != prev) ? nb[0] : nb[1];
      prev = cur;
      cur = next;
    }
    while (comp.vertices.size() > 1 && torus_distance(comp.vertices.front(), comp.vertices.back()) == 0.0) {
      comp.vertices.pop_back();
    }
    comp.closed = true;
    if (comp.vertices.size() >= 2) out.components.push_back(std::move(comp));
  }
  return out;
}

}  // namespace curveband
