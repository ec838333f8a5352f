#include "relregion/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace relregion {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::vector<Vec2> box_corners_2d(const BoxObstacle& b) {
    return {{b.lo.x, b.lo.y}, {b.hi.x, b.lo.y}, {b.hi.x, b.hi.y}, {b.lo.x, b.hi.y}};
}

std::vector<Vec2> footprint_at(const PolygonRobot& robot, const State& x) {
    const double c = std::cos(x.angle);
    const double s = std::sin(x.angle);
    std::vector<Vec2> out;
    out.reserve(robot.vertices.size());
    for (const Vec2& v : robot.vertices) {
        out.push_back({x.translation.x + c * v.x - s * v.y, x.translation.y + s * v.x + c * v.y});
    }
    return out;
}

bool collides_2d(const RobotShape& robot, const State& x, const Obstacle& obstacle) {
    const Vec2 pos{x.translation.x, x.translation.y};

    const auto vs_polygon = [&](std::span<const Vec2> poly) {
        if (std::holds_alternative<PointRobot>(robot)) {
            return geom::point_in_convex(poly, pos);
        }
        if (const auto* disc = std::get_if<DiscRobot>(&robot)) {
            return geom::squared_distance_point_convex(poly, pos) <= disc->radius * disc->radius;
        }
        const auto& shape = std::get<PolygonRobot>(robot);
        const std::vector<Vec2> fp = footprint_at(shape, x);
        return geom::convex_polygons_overlap(fp, poly);
    };

    if (const auto* poly = std::get_if<PolygonObstacle>(&obstacle)) {
        return vs_polygon(poly->vertices);
    }
    const auto& box = std::get<BoxObstacle>(obstacle);
    return vs_polygon(box_corners_2d(box));
}

bool collides_3d(const RobotShape& robot, const State& x, const Obstacle& obstacle) {
    const auto& box = std::get<BoxObstacle>(obstacle);
    if (std::holds_alternative<PointRobot>(robot)) {
        return geom::squared_distance_point_aabb(x.translation, box.lo, box.hi) <= 0.0;
    }
    if (const auto* disc = std::get_if<DiscRobot>(&robot)) {
        return geom::squared_distance_point_aabb(x.translation, box.lo, box.hi) <=
               disc->radius * disc->radius;
    }
    const auto& body = std::get<BoxRobot>(robot);
    return geom::obb_aabb_overlap(x.translation, body.half_extents, x.rotation, box.lo, box.hi);
}

}  // namespace

bool Scenario::is_state_valid(const State& x) const {
    if (!space.contains(x)) return false;
    for (const Obstacle& obstacle : obstacles) {
        const bool hit = space.type == SpaceType::SE2 ? collides_2d(robot, x, obstacle)
                                                      : collides_3d(robot, x, obstacle);
        if (hit) return false;
    }
    return true;
}

bool Scenario::is_motion_valid(const State& a, const State& b) const {
    // Canonical endpoint order makes the interpolated check set identical for
    // (a, b) and (b, a).
    const auto less = [](const State& u, const State& v) {
        if (u.translation.x != v.translation.x) return u.translation.x < v.translation.x;
        if (u.translation.y != v.translation.y) return u.translation.y < v.translation.y;
        if (u.translation.z != v.translation.z) return u.translation.z < v.translation.z;
        if (u.angle != v.angle) return u.angle < v.angle;
        if (u.rotation.w != v.rotation.w) return u.rotation.w < v.rotation.w;
        if (u.rotation.x != v.rotation.x) return u.rotation.x < v.rotation.x;
        if (u.rotation.y != v.rotation.y) return u.rotation.y < v.rotation.y;
        return u.rotation.z < v.rotation.z;
    };
    const State& from = less(b, a) ? b : a;
    const State& to = less(b, a) ? a : b;

    const double d = distance(from, to, space).value();
    const double step = motion_resolution * space.diagonal();
    // Power-of-two subdivision so finer resolutions check a superset of the
    // coarser check points.
    std::uint64_t n = 1;
    while (n * step < d && n < (1u << 24)) n <<= 1;

    for (std::uint64_t i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        if (!is_state_valid(interpolate(from, to, space, u))) return false;
    }
    return true;
}

State Scenario::sample_goal(Rng& rng) const {
    const double r = goal_radius.value();
    if (r <= 0.0) return goal_center;

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double t_max = r / space.w_t;
    const double rot_max = space.w_r > 0.0 ? std::min(kPi, r / space.w_r) : kPi;
    for (;;) {
        State cand = goal_center;
        const Vec3 ball = detail::sample_unit_ball(space.translation_dims(), rng);
        cand.translation = goal_center.translation + ball * t_max;
        if (space.type == SpaceType::SE2) {
            cand.angle = wrap_angle(goal_center.angle + (2.0 * u01(rng) - 1.0) * rot_max);
        } else {
            std::normal_distribution<double> n01(0.0, 1.0);
            Vec3 axis{n01(rng), n01(rng), n01(rng)};
            const double norm = axis.norm();
            if (norm < 1e-12) continue;
            const double ang = (2.0 * u01(rng) - 1.0) * rot_max;
            cand.rotation =
                (goal_center.rotation * Quat::from_axis_angle(axis * (1.0 / norm), ang))
                    .normalized();
        }
        if (distance(cand, goal_center, space) <= goal_radius) return cand;
    }
}

void Scenario::validate() const {
    space.validate();
    if (goal_radius < Cost::zero()) throw InvalidScenario("goal radius must be nonnegative");
    if (motion_resolution <= 0.0 || motion_resolution > 1.0)
        throw InvalidScenario("motion resolution must be in (0, 1]");

    const bool is_2d = space.type == SpaceType::SE2;
    for (const Obstacle& obstacle : obstacles) {
        if (const auto* poly = std::get_if<PolygonObstacle>(&obstacle)) {
            if (!is_2d) throw InvalidScenario("polygon obstacles are 2D-only");
            if (!geom::polygon_is_convex_ccw(poly->vertices))
                throw InvalidScenario("obstacle polygon must be convex and CCW");
        } else {
            const auto& box = std::get<BoxObstacle>(obstacle);
            if (!(box.lo.x < box.hi.x) || !(box.lo.y < box.hi.y))
                throw InvalidScenario("box obstacle requires min < max per axis");
            if (!is_2d && !(box.lo.z < box.hi.z))
                throw InvalidScenario("box obstacle requires min < max per axis");
        }
    }

    if (const auto* disc = std::get_if<DiscRobot>(&robot)) {
        if (disc->radius <= 0.0) throw InvalidScenario("disc robot radius must be positive");
    } else if (const auto* poly = std::get_if<PolygonRobot>(&robot)) {
        if (!is_2d) throw InvalidScenario("polygon robot is 2D-only");
        if (!geom::polygon_is_convex_ccw(poly->vertices))
            throw InvalidScenario("robot polygon must be convex and CCW");
    } else if (const auto* box = std::get_if<BoxRobot>(&robot)) {
        if (is_2d) throw InvalidScenario("box robot is 3D-only");
        if (box->half_extents.x <= 0.0 || box->half_extents.y <= 0.0 || box->half_extents.z <= 0.0)
            throw InvalidScenario("box robot half extents must be positive");
    }

    if (!is_state_valid(start)) throw InvalidScenario("start state is in collision");

    // The goal region must contain at least one valid state; probe with a
    // fixed-seed sampler so validation is deterministic.
    if (is_state_valid(goal_center)) return;
    Rng rng(0xC0FFEEu);
    for (int i = 0; i < 1000; ++i) {
        if (is_state_valid(sample_goal(rng))) return;
    }
    throw InvalidScenario("no valid state found in the goal region");
}

namespace {

json state_to_json(const State& x, const SpaceDef& s) {
    if (s.type == SpaceType::SE2) {
        return json::array({x.translation.x, x.translation.y, x.angle});
    }
    return json::array({x.translation.x, x.translation.y, x.translation.z, x.rotation.w,
                        x.rotation.x, x.rotation.y, x.rotation.z});
}

State state_from_json(const json& j, const SpaceDef& s, const std::string& what) {
    if (!j.is_array()) throw InvalidScenario(what + ": state must be an array");
    if (s.type == SpaceType::SE2) {
        if (j.size() != 3) throw InvalidScenario(what + ": SE2 state is [x, y, angle]");
        return make_se2(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
    }
    if (j.size() != 7)
        throw InvalidScenario(what + ": SE3 state is [x, y, z, qw, qx, qy, qz]");
    const Quat q{j[3].get<double>(), j[4].get<double>(), j[5].get<double>(), j[6].get<double>()};
    if (q.norm() < 1e-9) throw InvalidScenario(what + ": zero quaternion");
    return make_se3({j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}, q);
}

std::vector<Vec2> vertices_from_json(const json& j, const std::string& what) {
    std::vector<Vec2> out;
    if (!j.is_array() || j.size() < 3) throw InvalidScenario(what + ": need >= 3 vertices");
    for (const auto& v : j) {
        if (!v.is_array() || v.size() != 2) throw InvalidScenario(what + ": vertex must be [x, y]");
        out.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return out;
}

json vertices_to_json(const std::vector<Vec2>& vs) {
    json out = json::array();
    for (const Vec2& v : vs) out.push_back(json::array({v.x, v.y}));
    return out;
}

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

Scenario load_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_of_offset(text, e.byte), e.what());
    }

    try {
        if (!doc.contains("format") || doc["format"].get<int>() != 1)
            throw InvalidScenario("unsupported or missing format version");

        Scenario sc;
        const auto& js = doc.at("space");
        const std::string type = js.at("type").get<std::string>();
        if (type == "SE2") {
            sc.space.type = SpaceType::SE2;
        } else if (type == "SE3") {
            sc.space.type = SpaceType::SE3;
        } else {
            throw InvalidScenario("space.type must be SE2 or SE3");
        }
        const auto& jb = js.at("bounds");
        if (!jb.is_array() || static_cast<int>(jb.size()) != sc.space.translation_dims())
            throw InvalidScenario("space.bounds arity must match the space dimension");
        for (std::size_t i = 0; i < jb.size(); ++i) {
            sc.space.bounds[i] = {jb[i].at(0).get<double>(), jb[i].at(1).get<double>()};
        }
        sc.space.w_t = js.value("w_t", 1.0);
        sc.space.w_r = js.value("w_r", 1.0);

        const auto& jr = doc.at("robot");
        const std::string kind = jr.at("kind").get<std::string>();
        const json params = jr.value("params", json::object());
        if (kind == "point") {
            sc.robot = PointRobot{};
        } else if (kind == "disc") {
            sc.robot = DiscRobot{params.at("radius").get<double>()};
        } else if (kind == "polygon") {
            sc.robot = PolygonRobot{vertices_from_json(params.at("vertices"), "robot")};
        } else if (kind == "box") {
            const auto& he = params.at("half_extents");
            sc.robot = BoxRobot{{he.at(0).get<double>(), he.at(1).get<double>(),
                                 he.at(2).get<double>()}};
        } else {
            throw InvalidScenario("unknown robot kind: " + kind);
        }

        for (const auto& jo : doc.value("obstacles", json::array())) {
            const std::string okind = jo.at("kind").get<std::string>();
            const auto& data = jo.at("data");
            if (okind == "polygon") {
                sc.obstacles.emplace_back(
                    PolygonObstacle{vertices_from_json(data.at("vertices"), "obstacle")});
            } else if (okind == "box") {
                const auto& lo = data.at("min");
                const auto& hi = data.at("max");
                BoxObstacle box;
                box.lo = {lo.at(0).get<double>(), lo.at(1).get<double>(),
                          lo.size() > 2 ? lo.at(2).get<double>() : 0.0};
                box.hi = {hi.at(0).get<double>(), hi.at(1).get<double>(),
                          hi.size() > 2 ? hi.at(2).get<double>() : 0.0};
                sc.obstacles.emplace_back(box);
            } else {
                throw InvalidScenario("unknown obstacle kind: " + okind);
            }
        }

        sc.start = state_from_json(doc.at("start"), sc.space, "start");
        sc.goal_center = state_from_json(doc.at("goal").at("center"), sc.space, "goal");
        sc.goal_radius = Cost(doc.at("goal").value("radius", 0.0));
        sc.name = doc.value("name", std::string{});
        sc.motion_resolution = doc.value("motion_resolution", 0.01);

        sc.validate();
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidScenario(e.what());
    }
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string save_scenario(const Scenario& sc) {
    json doc;
    doc["format"] = 1;
    doc["name"] = sc.name;
    json js;
    js["type"] = sc.space.type == SpaceType::SE2 ? "SE2" : "SE3";
    json jb = json::array();
    for (int i = 0; i < sc.space.translation_dims(); ++i) {
        jb.push_back(json::array({sc.space.bounds[static_cast<std::size_t>(i)].lo,
                                  sc.space.bounds[static_cast<std::size_t>(i)].hi}));
    }
    js["bounds"] = jb;
    js["w_t"] = sc.space.w_t;
    js["w_r"] = sc.space.w_r;
    doc["space"] = js;

    json jr;
    if (std::holds_alternative<PointRobot>(sc.robot)) {
        jr["kind"] = "point";
        jr["params"] = json::object();
    } else if (const auto* disc = std::get_if<DiscRobot>(&sc.robot)) {
        jr["kind"] = "disc";
        jr["params"] = {{"radius", disc->radius}};
    } else if (const auto* poly = std::get_if<PolygonRobot>(&sc.robot)) {
        jr["kind"] = "polygon";
        jr["params"] = {{"vertices", vertices_to_json(poly->vertices)}};
    } else {
        const auto& box = std::get<BoxRobot>(sc.robot);
        jr["kind"] = "box";
        jr["params"] = {
            {"half_extents",
             json::array({box.half_extents.x, box.half_extents.y, box.half_extents.z})}};
    }
    doc["robot"] = jr;

    json jo = json::array();
    for (const Obstacle& obstacle : sc.obstacles) {
        json o;
        if (const auto* poly = std::get_if<PolygonObstacle>(&obstacle)) {
            o["kind"] = "polygon";
            o["data"] = {{"vertices", vertices_to_json(poly->vertices)}};
        } else {
            const auto& box = std::get<BoxObstacle>(obstacle);
            o["kind"] = "box";
            if (sc.space.type == SpaceType::SE2) {
                o["data"] = {{"min", json::array({box.lo.x, box.lo.y})},
                             {"max", json::array({box.hi.x, box.hi.y})}};
            } else {
                o["data"] = {{"min", json::array({box.lo.x, box.lo.y, box.lo.z})},
                             {"max", json::array({box.hi.x, box.hi.y, box.hi.z})}};
            }
        }
        jo.push_back(o);
    }
    doc["obstacles"] = jo;
    doc["start"] = state_to_json(sc.start, sc.space);
    doc["goal"] = {{"center", state_to_json(sc.goal_center, sc.space)},
                   {"radius", sc.goal_radius.value()}};
    doc["motion_resolution"] = sc.motion_resolution;
    return doc.dump(2) + "\n";
}

void save_scenario_file(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open scenario file for write: " + path);
    out << save_scenario(sc);
}

}  // namespace relregion
