#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace relregion {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    Vec2 perp() const { return {-y, x}; }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double squared_norm() const { return x * x + y * y + z * z; }
    Vec2 xy() const { return {x, y}; }

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Unit quaternion, scalar-first (w, x, y, z).
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    Vec3 rotate(const Vec3& v) const {
        const Vec3 u{x, y, z};
        const Vec3 t = u.cross(v) * 2.0;
        return v + t * w + u.cross(t);
    }

    static Quat from_axis_angle(const Vec3& axis, double angle) {
        const double h = 0.5 * angle;
        const double s = std::sin(h);
        return {std::cos(h), axis.x * s, axis.y * s, axis.z * s};
    }

    friend bool operator==(const Quat&, const Quat&) = default;
};

namespace geom {

/// True when the vertex list is a convex polygon in counter-clockwise order
/// (collinear edges allowed, self-intersection rejected by convexity).
bool polygon_is_convex_ccw(std::span<const Vec2> poly);

/// Point containment in a convex CCW polygon. Boundary counts as inside.
bool point_in_convex(std::span<const Vec2> poly, const Vec2& p);

/// Squared distance from a point to a convex CCW polygon; 0 when inside.
double squared_distance_point_convex(std::span<const Vec2> poly, const Vec2& p);

/// Separating-axis overlap test for two convex CCW polygons.
/// Touching boundaries count as overlap.
bool convex_polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

/// Squared distance from a point to an axis-aligned box; 0 when inside.
double squared_distance_point_aabb(const Vec3& p, const Vec3& lo, const Vec3& hi);

/// Separating-axis test (15 candidate axes) between an oriented box
/// (center, half extents, rotation) and an axis-aligned box.
/// Touching counts as overlap.
bool obb_aabb_overlap(const Vec3& center, const Vec3& half, const Quat& rot,
                      const Vec3& lo, const Vec3& hi);

}  // namespace geom

}  // namespace relregion
