#pragma once

#include <array>
#include <vector>

#include "deformesh/geometry.hpp"
#include "deformesh/seeding.hpp"

namespace deformesh {

enum class NodeClass { Interior, Exterior, OnBoundary };
enum class Region { Interior, Exterior };

/// Selected nodes are OnBoundary (they must sit within eps_b of the contour);
/// every other node is classified by point_in_polygon.
std::vector<NodeClass> classify_nodes(const BackgroundMesh& mesh, const Contour& c, double eps_b);

/// Kept cells with a compacted node numbering.
struct ExtractedRegion {
    std::vector<Point2> nodes;
    std::vector<std::array<int, 4>> quads;  // counterclockwise, compacted indices
    std::vector<int> source_node;           // compacted -> background node
    std::vector<int> source_cell;           // quad -> background cell
    std::vector<std::uint8_t> contour_node; // 1 when the node is a selected (contour) node
};

/// Keeps a cell when each of its nodes is in the requested class or OnBoundary.
/// A cell whose four nodes are all OnBoundary goes to the side containing its centroid.
ExtractedRegion extract_region(const BackgroundMesh& mesh, const std::vector<NodeClass>& classes, Region keep,
                               const Contour& c, double eps_b);

/// Splits each quad along its shorter diagonal into two counterclockwise triangles.
TriMesh triangulate_quads(const ExtractedRegion& region);

double quad_area(const std::array<Point2, 4>& q);

}  // namespace deformesh
