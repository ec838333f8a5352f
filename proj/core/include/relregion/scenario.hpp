#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relregion/cost.hpp"
#include "relregion/geometry.hpp"
#include "relregion/state_space.hpp"

namespace relregion {

/// Convex CCW polygon obstacle (2D worlds only).
struct PolygonObstacle {
    std::vector<Vec2> vertices;
};

/// Axis-aligned box obstacle; z extent is ignored in 2D worlds.
struct BoxObstacle {
    Vec3 lo;
    Vec3 hi;
};

using Obstacle = std::variant<PolygonObstacle, BoxObstacle>;

struct PointRobot {};
struct DiscRobot {
    double radius = 0.0;  // sphere in 3D worlds
};
/// Convex CCW footprint in the robot frame, rotated by the state heading (2D).
struct PolygonRobot {
    std::vector<Vec2> vertices;
};
/// Box oriented by the state quaternion (3D).
struct BoxRobot {
    Vec3 half_extents;
};

using RobotShape = std::variant<PointRobot, DiscRobot, PolygonRobot, BoxRobot>;

struct ParseError : std::runtime_error {
    ParseError(int line_, const std::string& reason)
        : std::runtime_error("parse error (line " + std::to_string(line_) + "): " + reason),
          line(line_) {}
    int line;
};

struct InvalidScenario : std::runtime_error {
    explicit InvalidScenario(const std::string& reason)
        : std::runtime_error("invalid scenario: " + reason) {}
};

/// A planning problem: world bounds, obstacles, robot shape, start state and
/// goal region. Immutable after load; all queries are const and thread-safe.
struct Scenario {
    SpaceDef space;
    std::vector<Obstacle> obstacles;
    RobotShape robot;
    State start;
    State goal_center;
    Cost goal_radius{0.0};
    std::string name;
    /// Motion-check resolution as a fraction of space.diagonal().
    double motion_resolution = 0.01;

    /// True iff the state is within bounds and the robot placed at it
    /// intersects no obstacle. Boundary contact counts as collision.
    [[nodiscard]] bool is_state_valid(const State& x) const;

    /// Dense interpolation check at the configured resolution, endpoints
    /// included. Subdivision counts nest under refinement, so halving the
    /// resolution never loses a detected collision.
    [[nodiscard]] bool is_motion_valid(const State& a, const State& b) const;

    /// A state with distance(x, goal_center) <= goal_radius.
    [[nodiscard]] State sample_goal(Rng& rng) const;

    /// Checks structural invariants, start validity, and that the goal region
    /// contains at least one valid state. Throws InvalidScenario.
    void validate() const;
};

Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string save_scenario(const Scenario& sc);
void save_scenario_file(const Scenario& sc, const std::string& path);

}  // namespace relregion
