#include "curveband/point_set.hpp"

#include "curveband/errors.hpp"

namespace curveband {

PointSet::PointSet(int dim) : coords_(dim, 0) {
  detail::require(dim > 0, "PointSet: dimension must be positive");
}

PointSet::PointSet(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  detail::require(coords_.rows() > 0, "PointSet: dimension must be positive");
  detail::require(coords_.allFinite(), "PointSet: coordinates must be finite");
}

Vec2 PointSet::point2(std::size_t i) const {
  detail::require(dim() == 2, "PointSet::point2: points are not 2-D");
  const auto c = point(i);
  return {c(0), c(1)};
}

}  // namespace curveband
