#include "deformesh/extraction.hpp"

#include <string>

namespace deformesh {

std::vector<NodeClass> classify_nodes(const BackgroundMesh& mesh, const Contour& c, double eps_b) {
    if (!c.closed)
        throw GeometryError("classification requires closed contour");
    std::vector<NodeClass> out(mesh.node_count());
    for (std::size_t n = 0; n < mesh.node_count(); ++n) {
        const Point2 p = mesh.position(static_cast<int>(n));
        const NodeTag& tag = mesh.tag(static_cast<int>(n));
        if (tag.kind == NodeKind::Selected) {
            const double d = distance_to_polyline(p, c);
            if (d > eps_b)
                throw ExtractionError("selected node " + std::to_string(n) + " for contour point " +
                                      std::to_string(tag.contour_index) + " is " + std::to_string(d) +
                                      " away from the contour");
            out[n] = NodeClass::OnBoundary;
            continue;
        }
        switch (point_in_polygon(p, c, eps_b)) {
        case Location::Inside:
            out[n] = NodeClass::Interior;
            break;
        case Location::Outside:
            out[n] = NodeClass::Exterior;
            break;
        case Location::OnBoundary:
            out[n] = NodeClass::OnBoundary;
            break;
        }
    }
    return out;
}

double quad_area(const std::array<Point2, 4>& q) {
    return 0.5 * (cross(q[0], q[1]) + cross(q[1], q[2]) + cross(q[2], q[3]) + cross(q[3], q[0]));
}

ExtractedRegion extract_region(const BackgroundMesh& mesh, const std::vector<NodeClass>& classes, Region keep,
                               const Contour& c, double eps_b) {
    if (classes.size() != mesh.node_count())
        throw ExtractionError("classification size does not match the mesh");
    const NodeClass wanted = keep == Region::Interior ? NodeClass::Interior : NodeClass::Exterior;
    ExtractedRegion r;
    std::vector<int> remap(mesh.node_count(), -1);
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto ids = mesh.cell_nodes(e);
        bool keepable = true;
        bool any_wanted = false;
        for (int id : ids) {
            keepable = keepable && (classes[id] == wanted || classes[id] == NodeClass::OnBoundary);
            any_wanted = any_wanted || classes[id] == wanted;
        }
        if (!keepable)
            continue;
        if (!any_wanted) {
            Point2 centroid{};
            for (int id : ids)
                centroid += 0.25 * mesh.position(id);
            const Location loc = point_in_polygon(centroid, c, eps_b);
            const bool inside = loc == Location::Inside;
            if (loc == Location::OnBoundary || inside != (keep == Region::Interior))
                continue;
        }
        std::array<int, 4> q{};
        for (int a = 0; a < 4; ++a) {
            const int id = ids[a];
            if (remap[id] < 0) {
                remap[id] = static_cast<int>(r.nodes.size());
                r.nodes.push_back(mesh.position(id));
                r.source_node.push_back(id);
                r.contour_node.push_back(mesh.tag(id).kind == NodeKind::Selected ? 1 : 0);
            }
            q[a] = remap[id];
        }
        r.quads.push_back(q);
        r.source_cell.push_back(e);
    }
    if (r.quads.empty())
        throw ExtractionError("no cells in requested region");
    return r;
}

TriMesh triangulate_quads(const ExtractedRegion& region) {
    TriMesh m;
    m.nodes = region.nodes;
    m.triangles.reserve(2 * region.quads.size());
    for (std::size_t k = 0; k < region.quads.size(); ++k) {
        const auto& q = region.quads[k];
        const auto& p = region.nodes;
        // Diagonal (0,2) gives (0,1,2),(0,2,3); diagonal (1,3) gives (0,1,3),(1,2,3).
        const std::array<std::array<int, 3>, 2> split02{{{q[0], q[1], q[2]}, {q[0], q[2], q[3]}}};
        const std::array<std::array<int, 3>, 2> split13{{{q[0], q[1], q[3]}, {q[1], q[2], q[3]}}};
        auto valid = [&](const std::array<std::array<int, 3>, 2>& s) {
            for (const auto& t : s)
                if (!(signed_area(p[t[0]], p[t[1]], p[t[2]]) > 0.0))
                    return false;
            return true;
        };
        const bool prefer02 = distance(p[q[0]], p[q[2]]) <= distance(p[q[1]], p[q[3]]);
        const auto& first = prefer02 ? split02 : split13;
        const auto& second = prefer02 ? split13 : split02;
        const auto* chosen = valid(first) ? &first : valid(second) ? &second : nullptr;
        if (!chosen)
            throw ExtractionError("quad " + std::to_string(k) + " (background cell " +
                                  std::to_string(region.source_cell[k]) + ") has no positive-area split");
        m.triangles.push_back((*chosen)[0]);
        m.triangles.push_back((*chosen)[1]);
    }
    m.boundary_node_flags.assign(m.nodes.size(), 0);
    for (std::size_t n = 0; n < m.nodes.size(); ++n)
        if (region.contour_node[n])
            m.boundary_node_flags[n] |= node_flags::kContour;
    mark_boundary_edges(m);
    return m;
}

}  // namespace deformesh
