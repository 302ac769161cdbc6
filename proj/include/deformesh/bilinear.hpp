#pragma once

#include <array>
#include <vector>

#include "deformesh/geometry.hpp"

namespace deformesh {

struct QuadraturePoint {
    double xi;
    double eta;
    double weight;
};

/// Tensor Gauss-Legendre rule on [-1,1]^2 with `points_per_axis` in {1, 2, 3}.
const std::vector<QuadraturePoint>& gauss_rule(int points_per_axis);

/// Isoparametric bilinear quadrilateral evaluated at one reference point.
/// Corners are counterclockwise starting at reference (-1,-1).
struct BilinearEval {
    std::array<double, 4> shape{};
    std::array<double, 4> dshape_dx{};
    std::array<double, 4> dshape_dy{};
    double det_jacobian = 0.0;
    Point2 position;
};

BilinearEval eval_bilinear(const std::array<Point2, 4>& corners, double xi, double eta);

/// Determinant of the reference-to-physical Jacobian, without shape gradients.
double bilinear_det(const std::array<Point2, 4>& corners, double xi, double eta);

}  // namespace deformesh
