#include "relregion/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relregion {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);  // in [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

State make_se2(double x, double y, double angle) {
    State s;
    s.translation = {x, y, 0.0};
    s.angle = wrap_angle(angle);
    return s;
}

State make_se3(const Vec3& t, const Quat& q) {
    State s;
    s.translation = t;
    s.rotation = q.normalized();
    return s;
}

double SpaceDef::diagonal() const {
    double sq = 0.0;
    for (int i = 0; i < translation_dims(); ++i) {
        const double w = bounds[static_cast<std::size_t>(i)].hi - bounds[static_cast<std::size_t>(i)].lo;
        sq += w * w;
    }
    return w_t * std::sqrt(sq) + w_r * kPi;
}

bool SpaceDef::contains(const State& x) const {
    const std::array<double, 3> t = {x.translation.x, x.translation.y, x.translation.z};
    for (int i = 0; i < translation_dims(); ++i) {
        const auto& b = bounds[static_cast<std::size_t>(i)];
        if (t[static_cast<std::size_t>(i)] < b.lo || t[static_cast<std::size_t>(i)] > b.hi)
            return false;
    }
    return true;
}

void SpaceDef::validate() const {
    for (int i = 0; i < translation_dims(); ++i) {
        const auto& b = bounds[static_cast<std::size_t>(i)];
        if (!(b.lo < b.hi)) throw std::invalid_argument("SpaceDef: bounds require lo < hi");
    }
    if (!(w_t > 0.0)) throw std::invalid_argument("SpaceDef: w_t must be positive");
    if (w_r < 0.0) throw std::invalid_argument("SpaceDef: w_r must be nonnegative");
    if (!std::isfinite(diagonal()) || diagonal() <= 0.0)
        throw std::invalid_argument("SpaceDef: diagonal must be finite and positive");
}

namespace {

double rotation_distance(const State& a, const State& b, const SpaceDef& s) {
    if (s.type == SpaceType::SE2) {
        return std::abs(wrap_angle(b.angle - a.angle));
    }
    // Geodesic angle on SO(3) with q and -q identified. The atan2 form is
    // accurate for both small and near-pi angles.
    Quat qb = b.rotation;
    if (a.rotation.dot(qb) < 0.0) qb = {-qb.w, -qb.x, -qb.y, -qb.z};
    const Quat& qa = a.rotation;
    const double dn = std::sqrt((qa.w - qb.w) * (qa.w - qb.w) + (qa.x - qb.x) * (qa.x - qb.x) +
                                (qa.y - qb.y) * (qa.y - qb.y) + (qa.z - qb.z) * (qa.z - qb.z));
    const double sn = std::sqrt((qa.w + qb.w) * (qa.w + qb.w) + (qa.x + qb.x) * (qa.x + qb.x) +
                                (qa.y + qb.y) * (qa.y + qb.y) + (qa.z + qb.z) * (qa.z + qb.z));
    return 4.0 * std::atan2(dn, sn);
}

Quat slerp(const Quat& a, Quat b, double u) {
    double d = a.dot(b);
    if (d < 0.0) {
        b = {-b.w, -b.x, -b.y, -b.z};
        d = -d;
    }
    d = std::min(d, 1.0);
    const double theta = std::acos(d);
    if (theta < 1e-9) {
        Quat out{a.w + (b.w - a.w) * u, a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u,
                 a.z + (b.z - a.z) * u};
        return out.normalized();
    }
    const double s = std::sin(theta);
    const double ca = std::sin((1.0 - u) * theta) / s;
    const double cb = std::sin(u * theta) / s;
    return {a.w * ca + b.w * cb, a.x * ca + b.x * cb, a.y * ca + b.y * cb, a.z * ca + b.z * cb};
}

}  // namespace

Cost distance(const State& a, const State& b, const SpaceDef& s) {
    Vec3 dt = b.translation - a.translation;
    if (s.type == SpaceType::SE2) dt.z = 0.0;
    return Cost(s.w_t * dt.norm() + s.w_r * rotation_distance(a, b, s));
}

State interpolate(const State& a, const State& b, const SpaceDef& s, double u) {
    State out;
    out.translation = a.translation + (b.translation - a.translation) * u;
    if (s.type == SpaceType::SE2) {
        out.translation.z = 0.0;
        out.angle = wrap_angle(a.angle + u * wrap_angle(b.angle - a.angle));
    } else {
        out.rotation = slerp(a.rotation, b.rotation, u);
    }
    return out;
}

State sample_uniform(const SpaceDef& s, Rng& rng) {
    State out;
    std::array<double, 3> t{};
    for (int i = 0; i < s.translation_dims(); ++i) {
        const auto& b = s.bounds[static_cast<std::size_t>(i)];
        std::uniform_real_distribution<double> dist(b.lo, b.hi);
        t[static_cast<std::size_t>(i)] = dist(rng);
    }
    out.translation = {t[0], t[1], t[2]};
    detail::sample_uniform_rotation(s, rng, out);
    return out;
}

namespace detail {

Vec3 sample_unit_ball(int dims, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (dims == 2) {
        const double r = std::sqrt(u01(rng));
        const double a = 2.0 * kPi * u01(rng);
        return {r * std::cos(a), r * std::sin(a), 0.0};
    }
    std::normal_distribution<double> n01(0.0, 1.0);
    Vec3 dir{n01(rng), n01(rng), n01(rng)};
    const double n = dir.norm();
    if (n < 1e-300) return {0.0, 0.0, 0.0};
    const double r = std::cbrt(u01(rng));
    return dir * (r / n);
}

void sample_uniform_rotation(const SpaceDef& s, Rng& rng, State& out) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (s.type == SpaceType::SE2) {
        std::uniform_real_distribution<double> ua(-kPi, kPi);
        double a = ua(rng);
        if (a == -kPi) a = kPi;
        out.angle = a;
        return;
    }
    // Subgroup algorithm: exact uniform distribution on SO(3) from three
    // independent uniforms.
    const double u1 = u01(rng);
    const double t1 = 2.0 * kPi * u01(rng);
    const double t2 = 2.0 * kPi * u01(rng);
    const double s1 = std::sqrt(1.0 - u1);
    const double s2 = std::sqrt(u1);
    out.rotation = {s2 * std::cos(t2), s1 * std::sin(t1), s1 * std::cos(t1), s2 * std::sin(t2)};
}

}  // namespace detail

State sample_informed(const SpaceDef& s, const State& start, const State& goal, Cost c_cur,
                      Rng& rng) {
    if (!c_cur.is_finite()) return sample_uniform(s, rng);

    const int dims = s.translation_dims();
    Vec3 foci = goal.translation - start.translation;
    if (dims == 2) foci.z = 0.0;
    const double c_min = foci.norm();
    const double c_max = c_cur.value() / s.w_t;
    if (c_max < c_min && (c_min - c_max) > 1e-12 * std::max(1.0, c_min)) {
        throw EmptyInformedSet();
    }

    const double r1 = std::max(c_max, c_min) / 2.0;
    const double r2 = std::sqrt(std::max(0.0, c_max * c_max - c_min * c_min)) / 2.0;
    const Vec3 center = (start.translation + goal.translation) * 0.5;

    const Vec3 ball = detail::sample_unit_ball(dims, rng);
    State out;
    if (c_min < 1e-12) {
        // Coincident foci: the spheroid degenerates to a ball.
        out.translation = center + ball * r1;
    } else if (dims == 2) {
        const Vec2 a1{foci.x / c_min, foci.y / c_min};
        const Vec2 scaled{r1 * ball.x, r2 * ball.y};
        out.translation = {center.x + a1.x * scaled.x - a1.y * scaled.y,
                           center.y + a1.y * scaled.x + a1.x * scaled.y, 0.0};
    } else {
        const Vec3 a1 = foci * (1.0 / c_min);
        // Complete a1 to an orthonormal frame using the least-aligned axis.
        Vec3 ref{1, 0, 0};
        if (std::abs(a1.x) > std::abs(a1.y) && std::abs(a1.x) > std::abs(a1.z)) ref = {0, 1, 0};
        Vec3 a2 = a1.cross(ref);
        a2 = a2 * (1.0 / a2.norm());
        const Vec3 a3 = a1.cross(a2);
        out.translation = center + a1 * (r1 * ball.x) + a2 * (r2 * ball.y) + a3 * (r2 * ball.z);
    }
    if (dims == 2) out.translation.z = 0.0;
    detail::sample_uniform_rotation(s, rng, out);
    return out;
}

}  // namespace relregion
