#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "deformesh/error.hpp"

namespace deformesh {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
    constexpr Point2& operator+=(Point2 b) {
        x += b.x;
        y += b.y;
        return *this;
    }
    friend constexpr bool operator==(Point2, Point2) = default;
};

/// Vector quantities (velocities, displacements) share the point layout.
using Vec2 = Point2;

inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct BoundingBox {
    Point2 lo;
    Point2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double diagonal() const { return std::hypot(width(), height()); }
};

BoundingBox bounding_box(std::span<const Point2> points);

/// Ordered boundary points. A closed contour connects the last point back to the first.
struct Contour {
    std::vector<Point2> points;
    bool closed = true;

    std::size_t size() const { return points.size(); }
    std::size_t segment_count() const;
    /// Endpoints of segment `s` (wrapping for closed contours).
    std::pair<Point2, Point2> segment(std::size_t s) const;
};

/// Throws GeometryError unless the contour has finite coordinates, enough points,
/// distinct consecutive points and no self-intersections.
void validate_contour(const Contour& c);
bool is_simple(const Contour& c);

double distance_to_segment(Point2 p, Point2 a, Point2 b);
double distance_to_polyline(Point2 p, const Contour& c);

/// 1e-9 times the bounding-box diagonal of the contour.
double default_boundary_tolerance(const Contour& c);

enum class Location { Inside, Outside, OnBoundary };

/// OnBoundary when within `eps_b` of the polyline, otherwise even-odd ray crossing.
Location point_in_polygon(Point2 p, const Contour& c, double eps_b);

/// Minimum distance over all pairs of contour points (d_c).
double polyline_min_spacing(const Contour& c);

inline constexpr double kInfiniteAspect = std::numeric_limits<double>::infinity();

struct TriangleQuality {
    double signed_area = 0.0;
    double min_angle_deg = 0.0;
    double max_angle_deg = 0.0;
    /// longest edge / (2 * inradius); kInfiniteAspect for degenerate triangles.
    double aspect_ratio = kInfiniteAspect;
};

TriangleQuality triangle_quality(Point2 a, Point2 b, Point2 c);

inline double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

namespace node_flags {
inline constexpr std::uint8_t kBoundaryEdge = 1;  // lies on an edge used by one triangle
inline constexpr std::uint8_t kContour = 2;       // a prescribed contour point
}  // namespace node_flags

struct TriMesh {
    std::vector<Point2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> boundary_node_flags;
};

struct QualityReport {
    double min_angle = 0.0;
    double max_angle = 0.0;
    double min_signed_area = 0.0;
    double aspect_ratio_worst = 0.0;
    int inverted_count = 0;
};

/// Triangles with non-positive signed area are counted as inverted.
QualityReport quality_report(const TriMesh& m);

/// Throws GeometryError on out-of-range indices or duplicate triangles.
void validate_trimesh_topology(const TriMesh& m);

struct ManifoldCheck {
    int boundary_edges = 0;
    int interior_edges = 0;
    int nonmanifold_edges = 0;  // edges used by 3+ triangles
    int inconsistent_edges = 0; // interior edges traversed in the same direction twice
    bool ok() const { return nonmanifold_edges == 0 && inconsistent_edges == 0; }
};

ManifoldCheck check_manifold(const TriMesh& m);

/// Recomputes kBoundaryEdge flags from the triangle connectivity, preserving other bits.
void mark_boundary_edges(TriMesh& m);

double total_area(const TriMesh& m);

}  // namespace deformesh
