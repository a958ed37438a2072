#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "curveband/geometry.hpp"

namespace curveband {

/// N points in n dimensions, one point per column.
class PointSet {
 public:
  explicit PointSet(int dim = 2);
  /// Takes a dim x N matrix. Throws ContractViolation on non-finite entries.
  explicit PointSet(Eigen::MatrixXd coords);

  int dim() const noexcept { return static_cast<int>(coords_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(coords_.cols()); }
  bool empty() const noexcept { return coords_.cols() == 0; }

  const Eigen::MatrixXd& coords() const noexcept { return coords_; }
  auto point(std::size_t i) const { return coords_.col(static_cast<Eigen::Index>(i)); }
  /// Only valid for dim() == 2.
  Vec2 point2(std::size_t i) const;

 private:
  Eigen::MatrixXd coords_;
};

}  // namespace curveband
