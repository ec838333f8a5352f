#pragma once

#include <array>
#include <random>
#include <stdexcept>

#include "relregion/cost.hpp"
#include "relregion/geometry.hpp"

namespace relregion {

enum class SpaceType { SE2, SE3 };

/// A configuration: translation plus rotation. SE(2) uses `angle` (wrapped to
/// (-pi, pi]), SE(3) uses the unit quaternion `rotation`; the inactive
/// component stays at its default.
struct State {
    Vec3 translation;
    double angle = 0.0;
    Quat rotation;

    friend bool operator==(const State&, const State&) = default;
};

State make_se2(double x, double y, double angle);
State make_se3(const Vec3& t, const Quat& q);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SpaceDef {
    SpaceType type = SpaceType::SE2;
    std::array<Interval, 3> bounds{};  // z entry unused for SE2
    double w_t = 1.0;                  // translation weight
    double w_r = 1.0;                  // rotation weight

    [[nodiscard]] int translation_dims() const { return type == SpaceType::SE2 ? 2 : 3; }

    /// w_t * ||hi - lo||_2 + w_r * pi: the metric diameter of the space.
    [[nodiscard]] double diagonal() const;

    [[nodiscard]] bool contains(const State& x) const;

    void validate() const;  // throws std::invalid_argument
};

/// Weighted compound metric: w_t * ||t_b - t_a|| + w_r * rho, where rho is the
/// wrapped absolute angle difference (SE2) or the quaternion geodesic angle in
/// [0, pi] with q = -q identified (SE3).
Cost distance(const State& a, const State& b, const SpaceDef& s);

/// Shortest-arc interpolation; distance(a, interpolate(a, b, u)) == u * distance(a, b).
State interpolate(const State& a, const State& b, const SpaceDef& s, double u);

using Rng = std::mt19937_64;

State sample_uniform(const SpaceDef& s, Rng& rng);

struct EmptyInformedSet : std::runtime_error {
    EmptyInformedSet() : std::runtime_error("informed set is empty: c_cur below focal distance") {}
};

/// Direct sample from the prolate hyperspheroid with foci at the start/goal
/// translations and transverse diameter c_cur / w_t; rotation uniform.
/// c_cur = +inf falls back to sample_uniform. Throws EmptyInformedSet when
/// c_cur is below the focal distance.
State sample_informed(const SpaceDef& s, const State& start, const State& goal, Cost c_cur,
                      Rng& rng);

namespace detail {
/// Uniform point in the unit d-ball (d = 2 or 3).
Vec3 sample_unit_ball(int dims, Rng& rng);
/// Uniform rotation for the given space (angle or quaternion).
void sample_uniform_rotation(const SpaceDef& s, Rng& rng, State& out);
}  // namespace detail

}  // namespace relregion
