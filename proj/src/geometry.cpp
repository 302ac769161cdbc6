#include "deformesh/geometry.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <string>

namespace deformesh {

BoundingBox bounding_box(std::span<const Point2> points) {
    if (points.empty())
        throw GeometryError("bounding box of an empty point set");
    BoundingBox b{points.front(), points.front()};
    for (const Point2& p : points) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    }
    return b;
}

std::size_t Contour::segment_count() const {
    if (points.size() < 2)
        return 0;
    return closed ? points.size() : points.size() - 1;
}

std::pair<Point2, Point2> Contour::segment(std::size_t s) const {
    return {points[s], points[(s + 1) % points.size()]};
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(p1, p2, q1))
        return true;
    if (o2 == 0 && on_segment(p1, p2, q2))
        return true;
    if (o3 == 0 && on_segment(q1, q2, p1))
        return true;
    if (o4 == 0 && on_segment(q1, q2, p2))
        return true;
    return false;
}

}  // namespace

bool is_simple(const Contour& c) {
    const std::size_t ns = c.segment_count();
    const std::size_t n = c.points.size();
    for (std::size_t a = 0; a < ns; ++a) {
        const auto [p1, p2] = c.segment(a);
        for (std::size_t b = a + 1; b < ns; ++b) {
            const auto [q1, q2] = c.segment(b);
            const bool adjacent = (b == a + 1) || (c.closed && a == 0 && b == n - 1);
            if (adjacent) {
                // Neighbouring segments share one endpoint; they may not fold back onto each other.
                const Point2 shared = (b == a + 1) ? p2 : p1;
                const Point2 u = (b == a + 1) ? p1 : p2;
                const Point2 v = (b == a + 1) ? q2 : q1;
                if (orientation(shared, u, v) == 0 && dot(u - shared, v - shared) > 0.0)
                    return false;
                continue;
            }
            if (segments_intersect(p1, p2, q1, q2))
                return false;
        }
    }
    return true;
}

void validate_contour(const Contour& c) {
    const std::size_t n = c.points.size();
    if (c.closed && n < 3)
        throw GeometryError("closed contour needs at least 3 points, got " + std::to_string(n));
    if (!c.closed && n < 2)
        throw GeometryError("open contour needs at least 2 points, got " + std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) {
        if (!is_finite(c.points[k]))
            throw GeometryError("contour point " + std::to_string(k) + " is not finite");
    }
    for (std::size_t s = 0; s < c.segment_count(); ++s) {
        const auto [a, b] = c.segment(s);
        if (a == b)
            throw GeometryError("contour points " + std::to_string(s) + " and " +
                                std::to_string((s + 1) % n) + " coincide");
    }
    if (!is_simple(c))
        throw GeometryError("contour is self-intersecting");
}

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return distance(p, a);
    const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + s * ab);
}

double distance_to_polyline(Point2 p, const Contour& c) {
    if (c.points.size() == 1)
        return distance(p, c.points.front());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < c.segment_count(); ++s) {
        const auto [a, b] = c.segment(s);
        best = std::min(best, distance_to_segment(p, a, b));
    }
    return best;
}

double default_boundary_tolerance(const Contour& c) {
    return 1e-9 * bounding_box(c.points).diagonal();
}

Location point_in_polygon(Point2 p, const Contour& c, double eps_b) {
    if (!c.closed)
        throw GeometryError("classification requires closed contour");
    if (eps_b < 0.0)
        throw GeometryError("boundary tolerance must be non-negative");
    if (distance_to_polyline(p, c) <= eps_b)
        return Location::OnBoundary;
    bool inside = false;
    const std::size_t n = c.points.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = c.points[i];
        const Point2 b = c.points[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross)
                inside = !inside;
        }
    }
    return inside ? Location::Inside : Location::Outside;
}

double polyline_min_spacing(const Contour& c) {
    const auto& pts = c.points;
    if (pts.size() < 2)
        throw GeometryError("minimum spacing needs at least 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const double d = distance(pts[a], pts[b]);
            if (d == 0.0)
                throw GeometryError("contour points " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are duplicates");
            best = std::min(best, d);
        }
    }
    return best;
}

TriangleQuality triangle_quality(Point2 a, Point2 b, Point2 c) {
    TriangleQuality q;
    q.signed_area = signed_area(a, b, c);
    const double la = distance(b, c);  // opposite a
    const double lb = distance(c, a);
    const double lc = distance(a, b);
    const double area = std::abs(q.signed_area);
    const double perimeter = la + lb + lc;
    const double longest = std::max({la, lb, lc});
    if (area == 0.0 || longest == 0.0 || area <= 1e-14 * longest * longest) {
        q.min_angle_deg = 0.0;
        q.max_angle_deg = longest == 0.0 ? 0.0 : 180.0;
        q.aspect_ratio = kInfiniteAspect;
        return q;
    }
    auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv) * 180.0 / std::numbers::pi;
    };
    const double alpha = angle(la, lb, lc);
    const double beta = angle(lb, la, lc);
    const double gamma = angle(lc, la, lb);
    q.min_angle_deg = std::min({alpha, beta, gamma});
    q.max_angle_deg = std::max({alpha, beta, gamma});
    const double inradius = 2.0 * area / perimeter;
    q.aspect_ratio = longest / (2.0 * inradius);
    return q;
}

QualityReport quality_report(const TriMesh& m) {
    QualityReport r;
    if (m.triangles.empty())
        return r;
    r.min_angle = 180.0;
    r.max_angle = 0.0;
    r.min_signed_area = std::numeric_limits<double>::infinity();
    r.aspect_ratio_worst = 0.0;
    for (const auto& t : m.triangles) {
        const TriangleQuality q = triangle_quality(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]);
        r.min_angle = std::min(r.min_angle, q.min_angle_deg);
        r.max_angle = std::max(r.max_angle, q.max_angle_deg);
        r.min_signed_area = std::min(r.min_signed_area, q.signed_area);
        r.aspect_ratio_worst = std::max(r.aspect_ratio_worst, q.aspect_ratio);
        if (q.signed_area <= 0.0)
            ++r.inverted_count;
    }
    return r;
}

void validate_trimesh_topology(const TriMesh& m) {
    const int n = static_cast<int>(m.nodes.size());
    std::set<std::array<int, 3>> seen;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        auto tri = m.triangles[t];
        for (int v : tri) {
            if (v < 0 || v >= n)
                throw GeometryError("triangle " + std::to_string(t) + " references node " + std::to_string(v) +
                                    " out of range");
        }
        std::sort(tri.begin(), tri.end());
        if (tri[0] == tri[1] || tri[1] == tri[2])
            throw GeometryError("triangle " + std::to_string(t) + " repeats a node");
        if (!seen.insert(tri).second)
            throw GeometryError("triangle " + std::to_string(t) + " is a duplicate");
    }
}

namespace {

// Directed edge use counts keyed by the undirected edge.
std::map<std::pair<int, int>, std::pair<int, int>> edge_uses(const TriMesh& m) {
    std::map<std::pair<int, int>, std::pair<int, int>> uses;
    for (const auto& t : m.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            auto& u = uses[{std::min(a, b), std::max(a, b)}];
            (a < b ? u.first : u.second) += 1;
        }
    }
    return uses;
}

}  // namespace

ManifoldCheck check_manifold(const TriMesh& m) {
    ManifoldCheck r;
    for (const auto& [edge, use] : edge_uses(m)) {
        const int total = use.first + use.second;
        if (total == 1)
            ++r.boundary_edges;
        else if (total == 2) {
            ++r.interior_edges;
            if (use.first != 1)
                ++r.inconsistent_edges;
        } else
            ++r.nonmanifold_edges;
    }
    return r;
}

void mark_boundary_edges(TriMesh& m) {
    m.boundary_node_flags.resize(m.nodes.size(), 0);
    for (auto& f : m.boundary_node_flags)
        f &= static_cast<std::uint8_t>(~node_flags::kBoundaryEdge);
    for (const auto& [edge, use] : edge_uses(m)) {
        if (use.first + use.second == 1) {
            m.boundary_node_flags[edge.first] |= node_flags::kBoundaryEdge;
            m.boundary_node_flags[edge.second] |= node_flags::kBoundaryEdge;
        }
    }
}

double total_area(const TriMesh& m) {
    double a = 0.0;
    for (const auto& t : m.triangles)
        a += signed_area(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]);
    return a;
}

}  // namespace deformesh
