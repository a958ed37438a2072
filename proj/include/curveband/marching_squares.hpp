#pragma once

#include <Eigen/Core>

#include "curveband/polyline.hpp"

namespace curveband {

/// Iso-contour of a periodic scalar field sampled at x = (i/n1, j/n2),
/// values(i, j). Crossings are placed by linear interpolation along cell
/// edges; saddle cells are resolved by the cell-centre average. Because the
/// grid wraps, every crossing edge borders exactly two cells and every
/// returned component is a closed loop.
Polyline contour_periodic(const Eigen::MatrixXd& values, double level);

}  // namespace curveband
