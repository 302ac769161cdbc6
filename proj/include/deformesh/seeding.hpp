#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "deformesh/geometry.hpp"

namespace deformesh {

struct GridIndex {
    int i = 0;
    int j = 0;
    friend constexpr bool operator==(GridIndex, GridIndex) = default;
};

struct SelectionResult;

enum class NodeKind { Free, OuterBoundary, Selected };

struct NodeTag {
    NodeKind kind = NodeKind::Free;
    int contour_index = -1;  // valid when kind == Selected
};

/// Logically Cartesian node grid. Node (i, j) lives at index j * nx + i; cell (i, j)
/// spans nodes (i, j), (i+1, j), (i+1, j+1), (i, j+1) in counterclockwise order.
class BackgroundMesh {
public:
    BackgroundMesh() = default;
    BackgroundMesh(Point2 origin, double h, int nx, int ny);

    Point2 origin() const { return origin_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t node_count() const { return positions_.size(); }
    std::size_t cell_count() const { return static_cast<std::size_t>(nx_ - 1) * (ny_ - 1); }

    int node(int i, int j) const { return j * nx_ + i; }
    int node(GridIndex g) const { return node(g.i, g.j); }
    GridIndex grid_index(int node) const { return {node % nx_, node / nx_}; }
    int cell(int i, int j) const { return j * (nx_ - 1) + i; }
    GridIndex cell_index(int cell) const { return {cell % (nx_ - 1), cell / (nx_ - 1)}; }
    /// Global node ids of a cell, counterclockwise from the lower-left corner.
    std::array<int, 4> cell_nodes(int cell) const;

    /// Undeformed location origin + (i h, j h).
    Point2 grid_point(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
    bool on_outer_rectangle(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }

    const std::vector<Point2>& positions() const { return positions_; }
    std::vector<Point2>& positions() { return positions_; }
    Point2 position(int node) const { return positions_[node]; }

    const std::vector<NodeTag>& tags() const { return tags_; }
    const NodeTag& tag(int node) const { return tags_[node]; }

    /// Restores every node to its undeformed grid point.
    void reset_positions();

    friend void apply_selection(BackgroundMesh& mesh, const SelectionResult& sel);

private:
    Point2 origin_{};
    double h_ = 0.0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<Point2> positions_;
    std::vector<NodeTag> tags_;
};

struct SelectedPair {
    GridIndex node;     // P_k
    int contour_index;  // k, the index of Q_k in the contour
};

struct SelectionResult {
    std::vector<SelectedPair> pairs;
    std::vector<int> unmatched;
    /// Contour points that had to fall through to a later corner because the nearest was claimed.
    int conflicts = 0;
    /// Largest number of contour points binned into one cell (1 when the grid premise holds).
    int max_points_per_cell = 0;
};

inline constexpr double kDefaultSpacingSafety = 0.9;
inline constexpr std::size_t kDefaultNodeBudget = 4'000'000;

/// h = safety * d_c / sqrt(2).
double auto_grid_spacing(const Contour& c, double safety = kDefaultSpacingSafety);

/// Grid covering `bbox` grown by margin_cells * h on every side.
BackgroundMesh build_background_mesh(const BoundingBox& bbox, double h, int margin_cells,
                                     std::size_t node_budget = kDefaultNodeBudget);

/// Cell containing `p` in grid-local coordinates; nullopt when outside the grid.
std::optional<GridIndex> containing_cell(const BackgroundMesh& mesh, Point2 p);

/// Assigns a grid node to every contour point, in contour order, using the
/// nearest-corner cascade over the containing cell. Contour points whose
/// remaining candidate corners are all claimed end up in `unmatched`.
SelectionResult select_nodes(const BackgroundMesh& mesh, const Contour& c);

/// Tags the selected nodes. Throws SeedingError if one of them sits on the
/// grid's outer rectangle (the margin is too small).
void apply_selection(BackgroundMesh& mesh, const SelectionResult& sel);

/// Independent check of a selection against brute-force nearest-node search.
bool selection_oracle_check(const BackgroundMesh& mesh, const Contour& c, const SelectionResult& result);

}  // namespace deformesh
