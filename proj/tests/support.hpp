#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "deformesh/geometry.hpp"
#include "deformesh/seeding.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(DEFORMESH_TEST_DATA) / name;
}

inline deformesh::Contour unit_square() {
    return deformesh::Contour{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true};
}

inline deformesh::Contour circle(int n, double r = 1.0, deformesh::Point2 c = {0, 0}) {
    deformesh::Contour out;
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        out.points.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return out;
}

// Star-shaped polygon: sorted angles with random radii is always simple.
inline deformesh::Contour random_star(std::mt19937& rng, int min_points = 6, int max_points = 40) {
    std::uniform_int_distribution<int> count(min_points, max_points);
    std::uniform_real_distribution<double> radius(0.4, 1.0);
    std::uniform_real_distribution<double> jitter(-0.35, 0.35);
    std::uniform_real_distribution<double> shift(-3.0, 3.0);
    const int n = count(rng);
    const deformesh::Point2 c{shift(rng), shift(rng)};
    deformesh::Contour out;
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * (k + 0.5 + jitter(rng)) / n;
        const double r = radius(rng);
        out.points.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return out;
}

// Brute-force nearest grid node over every node of the grid.
inline deformesh::GridIndex nearest_grid_node(const deformesh::BackgroundMesh& m, deformesh::Point2 p) {
    deformesh::GridIndex best{};
    double best_d = INFINITY;
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) {
            const deformesh::Point2 g = m.grid_point(i, j);
            const double d = std::hypot(g.x - p.x, g.y - p.y);
            if (d < best_d) {
                best_d = d;
                best = {i, j};
            }
        }
    return best;
}

}  // namespace testing
