#include "deformesh/bilinear.hpp"

#include <cmath>

namespace deformesh {

namespace {

constexpr std::array<double, 4> kXi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kEta{-1.0, -1.0, 1.0, 1.0};

std::vector<QuadraturePoint> tensor_rule(const std::vector<double>& abscissae, const std::vector<double>& weights) {
    std::vector<QuadraturePoint> rule;
    for (std::size_t b = 0; b < abscissae.size(); ++b)
        for (std::size_t a = 0; a < abscissae.size(); ++a)
            rule.push_back({abscissae[a], abscissae[b], weights[a] * weights[b]});
    return rule;
}

}  // namespace

const std::vector<QuadraturePoint>& gauss_rule(int points_per_axis) {
    static const std::vector<QuadraturePoint> one = tensor_rule({0.0}, {2.0});
    static const std::vector<QuadraturePoint> two = tensor_rule({-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}, {1.0, 1.0});
    static const std::vector<QuadraturePoint> three =
        tensor_rule({-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0});
    switch (points_per_axis) {
    case 1:
        return one;
    case 2:
        return two;
    case 3:
        return three;
    default:
        throw GeometryError("quadrature order must be 1, 2 or 3");
    }
}

BilinearEval eval_bilinear(const std::array<Point2, 4>& corners, double xi, double eta) {
    BilinearEval e;
    std::array<double, 4> dxi{};
    std::array<double, 4> deta{};
    for (int a = 0; a < 4; ++a) {
        e.shape[a] = 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta);
        dxi[a] = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
        deta[a] = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
    }
    double x_xi = 0.0, x_eta = 0.0, y_xi = 0.0, y_eta = 0.0;
    for (int a = 0; a < 4; ++a) {
        x_xi += dxi[a] * corners[a].x;
        x_eta += deta[a] * corners[a].x;
        y_xi += dxi[a] * corners[a].y;
        y_eta += deta[a] * corners[a].y;
        e.position += e.shape[a] * corners[a];
    }
    e.det_jacobian = x_xi * y_eta - x_eta * y_xi;
    if (e.det_jacobian != 0.0) {
        const double inv = 1.0 / e.det_jacobian;
        for (int a = 0; a < 4; ++a) {
            e.dshape_dx[a] = inv * (y_eta * dxi[a] - y_xi * deta[a]);
            e.dshape_dy[a] = inv * (-x_eta * dxi[a] + x_xi * deta[a]);
        }
    }
    return e;
}

double bilinear_det(const std::array<Point2, 4>& corners, double xi, double eta) {
    double x_xi = 0.0, x_eta = 0.0, y_xi = 0.0, y_eta = 0.0;
    for (int a = 0; a < 4; ++a) {
        const double dxi = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
        const double deta = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
        x_xi += dxi * corners[a].x;
        x_eta += deta * corners[a].x;
        y_xi += dxi * corners[a].y;
        y_eta += deta * corners[a].y;
    }
    return x_xi * y_eta - x_eta * y_xi;
}

}  // namespace deformesh
