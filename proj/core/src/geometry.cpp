#include "relregion/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace relregion::geom {

bool polygon_is_convex_ccw(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const Vec2& c = poly[(i + 2) % n];
        if ((b - a).cross(c - b) < -1e-12) return false;  // right turn -> not CCW-convex
        area2 += a.cross(b);
    }
    return area2 > 0.0;
}

bool point_in_convex(std::span<const Vec2> poly, const Vec2& p) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        if ((b - a).cross(p - a) < 0.0) return false;
    }
    return true;
}

namespace {

double squared_distance_point_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 <= 0.0) return (p - a).squared_norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).squared_norm();
}

struct Interval1D {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void extend(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

Interval1D project(std::span<const Vec2> poly, const Vec2& axis) {
    Interval1D iv;
    for (const Vec2& v : poly) iv.extend(v.dot(axis));
    return iv;
}

// Strictly separated intervals; touching endpoints are not separated.
bool separated(const Interval1D& a, const Interval1D& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

}  // namespace

double squared_distance_point_convex(std::span<const Vec2> poly, const Vec2& p) {
    if (point_in_convex(poly, p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, squared_distance_point_segment(poly[i], poly[(i + 1) % n], p));
    }
    return best;
}

bool convex_polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b) {
    const auto has_separating_edge = [](std::span<const Vec2> edges, std::span<const Vec2> other) {
        const std::size_t n = edges.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 axis = (edges[(i + 1) % n] - edges[i]).perp();
            if (separated(project(edges, axis), project(other, axis))) return true;
        }
        return false;
    };
    return !has_separating_edge(a, b) && !has_separating_edge(b, a);
}

double squared_distance_point_aabb(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    const double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
    return dx * dx + dy * dy + dz * dz;
}

bool obb_aabb_overlap(const Vec3& center, const Vec3& half, const Quat& rot,
                      const Vec3& lo, const Vec3& hi) {
    const Vec3 box_center = (lo + hi) * 0.5;
    const Vec3 box_half = (hi - lo) * 0.5;
    const Vec3 t = center - box_center;

    const std::array<Vec3, 3> world = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    const std::array<Vec3, 3> obb = {rot.rotate(world[0]), rot.rotate(world[1]),
                                     rot.rotate(world[2])};
    const std::array<double, 3> obb_half = {half.x, half.y, half.z};
    const std::array<double, 3> box_half_a = {box_half.x, box_half.y, box_half.z};

    const auto separated_on = [&](const Vec3& axis) {
        const double len2 = axis.squared_norm();
        if (len2 < 1e-12) return false;  // degenerate cross product, covered elsewhere
        const double dist = std::abs(t.dot(axis));
        double ra = 0.0;
        for (int i = 0; i < 3; ++i) ra += box_half_a[i] * std::abs(world[i].dot(axis));
        double rb = 0.0;
        for (int i = 0; i < 3; ++i) rb += obb_half[i] * std::abs(obb[i].dot(axis));
        return dist > ra + rb;
    };

    for (const Vec3& axis : world)
        if (separated_on(axis)) return false;
    for (const Vec3& axis : obb)
        if (separated_on(axis)) return false;
    for (const Vec3& a : world)
        for (const Vec3& b : obb)
            if (separated_on(a.cross(b))) return false;
    return true;
}

}  // namespace relregion::geom
