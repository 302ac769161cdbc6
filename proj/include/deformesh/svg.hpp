#pragma once

#include <string>

#include "deformesh/extraction.hpp"
#include "deformesh/geometry.hpp"
#include "deformesh/seeding.hpp"

namespace deformesh {

/// Triangle edges, with the contour polyline in blue when given.
std::string trimesh_svg(const TriMesh& m, const Contour* contour = nullptr);

struct FigureInputs {
    const BackgroundMesh& initial;   // undeformed grid with selection applied
    const SelectionResult& selection;
    const BackgroundMesh& deformed;
    const Contour& contour;
    const ExtractedRegion& region;
    const TriMesh& mesh;
};

/// Four panels side by side: (a) grid with selected nodes and contour points,
/// (b) deformed grid, (c) contour with the kept cells, (d) triangulation.
std::string figure_svg(const FigureInputs& in);

}  // namespace deformesh
