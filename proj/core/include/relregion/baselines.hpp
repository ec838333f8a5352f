#pragma once

#include <optional>

#include "relregion/planner.hpp"
#include "relregion/scenario.hpp"

namespace relregion {

struct BaselineConfig {
    Cost steer_range{0.0};  // eta; 0 resolves to 0.15 * diagonal
    double goal_bias = 0.05;
    double rewire_scale = 1.0;  // scale on the k-nearest neighborhood rule
    std::uint64_t seed = 0;
    double time_budget = 10.0;
    std::optional<Cost> target_cost;
    std::optional<std::uint64_t> max_iterations;

    void validate() const;
};

/// Anytime RRT*: uniform sampling with goal bias, steer by eta, choose-parent
/// and rewire within the k-nearest neighborhood.
PlanResult rrt_star_plan(const Scenario& sc, const BaselineConfig& cfg, PlannerHooks hooks = {});

/// RRT* until the first solution, then direct informed sampling at the
/// current incumbent cost.
PlanResult informed_rrt_star_plan(const Scenario& sc, const BaselineConfig& cfg,
                                  PlannerHooks hooks = {});

/// RRT* extension followed by key-ordered global cost propagation, so g equals
/// the shortest path over evaluated edges after every iteration.
PlanResult rrt_sharp_plan(const Scenario& sc, const BaselineConfig& cfg, PlannerHooks hooks = {});

}  // namespace relregion
