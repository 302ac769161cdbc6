#include "deformesh/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace deformesh {

namespace {

constexpr double kPanel = 360.0;
constexpr double kPad = 12.0;
constexpr const char* kContourBlue = "#1f4fd1";

/// World-to-pixel map for one square panel, y pointing up.
class Viewport {
public:
    Viewport(const BoundingBox& world, double offset_x) : offset_x_(offset_x) {
        const double span = std::max(world.width(), world.height());
        scale_ = span > 0.0 ? (kPanel - 2.0 * kPad) / span : 1.0;
        lo_ = world.lo;
        // Centre the shorter side.
        shift_x_ = kPad + 0.5 * ((kPanel - 2.0 * kPad) - scale_ * world.width());
        shift_y_ = kPad + 0.5 * ((kPanel - 2.0 * kPad) - scale_ * world.height());
        height_ = world.height();
    }
    double x(Point2 p) const { return offset_x_ + shift_x_ + scale_ * (p.x - lo_.x); }
    double y(Point2 p) const { return shift_y_ + scale_ * (height_ - (p.y - lo_.y)); }

private:
    double offset_x_;
    double scale_ = 1.0;
    Point2 lo_;
    double shift_x_ = 0.0;
    double shift_y_ = 0.0;
    double height_ = 0.0;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string point_list(const Viewport& vp, const std::vector<Point2>& pts) {
    std::string s;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k)
            s += ' ';
        s += num(vp.x(pts[k])) + "," + num(vp.y(pts[k]));
    }
    return s;
}

std::string polygon(const Viewport& vp, const std::vector<Point2>& pts, const char* style) {
    return "<polygon points=\"" + point_list(vp, pts) + "\" " + style + "/>\n";
}

std::string contour_path(const Viewport& vp, const Contour& c) {
    const char* tag = c.closed ? "polygon" : "polyline";
    return std::string("<") + tag + " points=\"" + point_list(vp, c.points) +
           "\" fill=\"none\" stroke=\"" + kContourBlue + "\" stroke-width=\"2\"/>\n";
}

std::string dot(const Viewport& vp, Point2 p, double r, const char* fill) {
    return "<circle cx=\"" + num(vp.x(p)) + "\" cy=\"" + num(vp.y(p)) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
           "\"/>\n";
}

std::string header(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string label(double x, const char* text) {
    return "<text x=\"" + num(x + kPad) + "\" y=\"" + num(kPanel + 16.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\">" + text + "</text>\n";
}

BoundingBox grow(BoundingBox b, std::span<const Point2> pts) {
    const BoundingBox o = bounding_box(pts);
    b.lo.x = std::min(b.lo.x, o.lo.x);
    b.lo.y = std::min(b.lo.y, o.lo.y);
    b.hi.x = std::max(b.hi.x, o.hi.x);
    b.hi.y = std::max(b.hi.y, o.hi.y);
    return b;
}

std::string triangles(const Viewport& vp, const TriMesh& m) {
    std::string s = "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.6\">\n";
    for (const auto& t : m.triangles)
        s += polygon(vp, {m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]}, "");
    return s + "</g>\n";
}

std::string quads(const BackgroundMesh& mesh, const Viewport& vp, const char* stroke) {
    std::string s = std::string("<g fill=\"none\" stroke=\"") + stroke + "\" stroke-width=\"0.6\">\n";
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto ids = mesh.cell_nodes(e);
        s += polygon(vp, {mesh.position(ids[0]), mesh.position(ids[1]), mesh.position(ids[2]), mesh.position(ids[3])},
                     "");
    }
    return s + "</g>\n";
}

}  // namespace

std::string trimesh_svg(const TriMesh& m, const Contour* contour) {
    BoundingBox world = bounding_box(m.nodes);
    if (contour)
        world = grow(world, contour->points);
    const Viewport vp(world, 0.0);
    std::string s = header(kPanel, kPanel);
    s += triangles(vp, m);
    if (contour)
        s += contour_path(vp, *contour);
    return s + "</svg>\n";
}

std::string figure_svg(const FigureInputs& in) {
    BoundingBox world = grow(bounding_box(in.initial.positions()), in.deformed.positions());
    std::string s = header(4.0 * kPanel, kPanel + 24.0);

    {
        const Viewport vp(world, 0.0);
        s += quads(in.initial, vp, "#9a9a9a");
        s += contour_path(vp, in.contour);
        for (const Point2& p : in.contour.points)
            s += dot(vp, p, 2.5, kContourBlue);
        for (const SelectedPair& p : in.selection.pairs)
            s += dot(vp, in.initial.grid_point(p.node.i, p.node.j), 3.0, "black");
        s += label(0.0, "(a) background grid, selected nodes");
    }
    {
        const Viewport vp(world, kPanel);
        s += quads(in.deformed, vp, "#5a5a5a");
        for (const SelectedPair& p : in.selection.pairs)
            s += dot(vp, in.deformed.position(in.deformed.node(p.node)), 3.0, "black");
        s += label(kPanel, "(b) deformed grid");
    }
    {
        const Viewport vp(world, 2.0 * kPanel);
        s += "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.6\">\n";
        for (const auto& q : in.region.quads)
            s += polygon(vp, {in.region.nodes[q[0]], in.region.nodes[q[1]], in.region.nodes[q[2]], in.region.nodes[q[3]]},
                         "");
        s += "</g>\n";
        s += contour_path(vp, in.contour);
        s += label(2.0 * kPanel, "(c) contour and kept cells");
    }
    {
        const Viewport vp(world, 3.0 * kPanel);
        s += triangles(vp, in.mesh);
        s += label(3.0 * kPanel, "(d) triangular mesh");
    }
    return s + "</svg>\n";
}

}  // namespace deformesh
