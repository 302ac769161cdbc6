#include "deformesh/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>

namespace deformesh {

BackgroundMesh::BackgroundMesh(Point2 origin, double h, int nx, int ny)
    : origin_(origin), h_(h), nx_(nx), ny_(ny) {
    if (!(h > 0.0))
        throw SeedingError("grid spacing must be positive");
    if (nx < 2 || ny < 2)
        throw SeedingError("grid needs at least 2x2 nodes");
    positions_.resize(static_cast<std::size_t>(nx) * ny);
    tags_.resize(positions_.size());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            positions_[node(i, j)] = grid_point(i, j);
            if (on_outer_rectangle(i, j))
                tags_[node(i, j)].kind = NodeKind::OuterBoundary;
        }
    }
}

std::array<int, 4> BackgroundMesh::cell_nodes(int cell) const {
    const GridIndex c = cell_index(cell);
    return {node(c.i, c.j), node(c.i + 1, c.j), node(c.i + 1, c.j + 1), node(c.i, c.j + 1)};
}

void BackgroundMesh::reset_positions() {
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            positions_[node(i, j)] = grid_point(i, j);
}

double auto_grid_spacing(const Contour& c, double safety) {
    if (!(safety > 0.0 && safety < 1.0))
        throw SeedingError("spacing safety factor must lie in (0, 1)");
    const double dc = polyline_min_spacing(c);
    if (!(dc > 0.0))
        throw SeedingError("contour minimum spacing is zero");
    return safety * dc / std::numbers::sqrt2;
}

BackgroundMesh build_background_mesh(const BoundingBox& bbox, double h, int margin_cells, std::size_t node_budget) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw SeedingError("grid spacing must be positive and finite");
    if (margin_cells < 0)
        throw SeedingError("margin must be non-negative");
    if (!(bbox.width() >= 0.0 && bbox.height() >= 0.0))
        throw SeedingError("bounding box is inverted");
    // Tolerate widths that are an integer multiple of h up to round-off.
    auto cells_for = [h](double extent) {
        return static_cast<long long>(std::ceil(extent / h - 1e-9));
    };
    const long long cx = std::max(1LL, cells_for(bbox.width())) + 2LL * margin_cells;
    const long long cy = std::max(1LL, cells_for(bbox.height())) + 2LL * margin_cells;
    const long double nodes = static_cast<long double>(cx + 1) * static_cast<long double>(cy + 1);
    if (nodes > static_cast<long double>(node_budget))
        throw SeedingError("background grid of " + std::to_string(cx + 1) + "x" + std::to_string(cy + 1) +
                           " nodes exceeds the node budget of " + std::to_string(node_budget));
    const Point2 origin{bbox.lo.x - margin_cells * h, bbox.lo.y - margin_cells * h};
    return BackgroundMesh(origin, h, static_cast<int>(cx + 1), static_cast<int>(cy + 1));
}

std::optional<GridIndex> containing_cell(const BackgroundMesh& mesh, Point2 p) {
    const double t = (p.x - mesh.origin().x) / mesh.h();
    const double s = (p.y - mesh.origin().y) / mesh.h();
    if (!(t >= 0.0 && s >= 0.0 && t <= mesh.nx() - 1 && s <= mesh.ny() - 1))
        return std::nullopt;
    const int i = std::min(static_cast<int>(std::floor(t)), mesh.nx() - 2);
    const int j = std::min(static_cast<int>(std::floor(s)), mesh.ny() - 2);
    return GridIndex{i, j};
}

SelectionResult select_nodes(const BackgroundMesh& mesh, const Contour& c) {
    SelectionResult result;
    std::vector<char> node_claimed(mesh.node_count(), 0);
    std::vector<char> point_matched(c.size(), 0);
    std::map<int, int> cell_population;

    for (std::size_t k = 0; k < c.size(); ++k) {
        const Point2 y = c.points[k];
        const auto cell = containing_cell(mesh, y);
        if (!cell)
            throw SeedingError("contour point " + std::to_string(k) + " lies outside the background grid");
        const int pop = ++cell_population[mesh.cell(cell->i, cell->j)];
        result.max_points_per_cell = std::max(result.max_points_per_cell, pop);

        const int i = cell->i;
        const int j = cell->j;
        // Corner order of the cascade: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
        const std::array<GridIndex, 4> corners{{{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}}};
        std::array<double, 4> d{};
        for (int q = 0; q < 4; ++q)
            d[q] = distance(mesh.grid_point(corners[q].i, corners[q].j), y);

        double d_min = *std::min_element(d.begin(), d.end());
        for (int q = 0; q < 4 && !point_matched[k]; ++q) {
            if (d[q] != d_min)
                continue;
            const int n = mesh.node(corners[q]);
            if (!node_claimed[n]) {
                node_claimed[n] = 1;
                point_matched[k] = 1;
                result.pairs.push_back({corners[q], static_cast<int>(k)});
            } else {
                ++result.conflicts;
                d_min = std::numeric_limits<double>::infinity();
                for (int r = q + 1; r < 4; ++r)
                    d_min = std::min(d_min, d[r]);
            }
        }
        if (!point_matched[k])
            result.unmatched.push_back(static_cast<int>(k));
    }
    return result;
}

void apply_selection(BackgroundMesh& mesh, const SelectionResult& sel) {
    for (const SelectedPair& p : sel.pairs) {
        if (mesh.on_outer_rectangle(p.node.i, p.node.j))
            throw SeedingError("contour point " + std::to_string(p.contour_index) + " selected grid node (" +
                               std::to_string(p.node.i) + "," + std::to_string(p.node.j) +
                               ") on the outer rectangle; increase the grid margin or the bounding box");
    }
    for (const SelectedPair& p : sel.pairs)
        mesh.tags_[mesh.node(p.node)] = NodeTag{NodeKind::Selected, p.contour_index};
}

bool selection_oracle_check(const BackgroundMesh& mesh, const Contour& c, const SelectionResult& result) {
    std::set<int> nodes_seen;
    std::set<int> points_seen;
    for (const SelectedPair& p : result.pairs) {
        if (p.contour_index < 0 || static_cast<std::size_t>(p.contour_index) >= c.size())
            return false;
        if (!nodes_seen.insert(mesh.node(p.node)).second || !points_seen.insert(p.contour_index).second)
            return false;
        const Point2 y = c.points[p.contour_index];
        const auto cell = containing_cell(mesh, y);
        if (!cell)
            return false;
        const bool corner = (p.node.i == cell->i || p.node.i == cell->i + 1) &&
                            (p.node.j == cell->j || p.node.j == cell->j + 1);
        if (!corner)
            return false;
    }
    if (result.conflicts != 0 || !result.unmatched.empty())
        return true;
    if (result.pairs.size() != c.size())
        return false;
    // Exhaustive nearest-node search over the whole grid.
    const double tie_tol = 1e-12 * mesh.h();
    for (const SelectedPair& p : result.pairs) {
        const Point2 y = c.points[p.contour_index];
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < mesh.ny(); ++j)
            for (int i = 0; i < mesh.nx(); ++i)
                best = std::min(best, distance(mesh.grid_point(i, j), y));
        if (distance(mesh.grid_point(p.node.i, p.node.j), y) > best + tie_tol)
            return false;
    }
    return true;
}

}  // namespace deformesh
