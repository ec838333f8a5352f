#include "relregion/registry.hpp"

#include <stdexcept>

namespace relregion {

std::vector<std::string> registered_planner_names() {
    return {"relregion", "rrtstar", "informed_rrtstar", "rrtsharp"};
}

bool is_registered_planner(const std::string& name) {
    for (const auto& n : registered_planner_names()) {
        if (n == name) return true;
    }
    return false;
}

PlanResult run_planner(const PlannerSetup& setup, const Scenario& sc, std::uint64_t seed,
                       double time_budget, std::optional<Cost> target_cost, PlannerHooks hooks) {
    if (setup.name == "relregion") {
        PlannerConfig cfg = setup.relregion;
        cfg.seed = seed;
        cfg.time_budget = time_budget;
        cfg.target_cost = target_cost;
        return RelRegionPlanner(sc, cfg, std::move(hooks)).plan();
    }
    BaselineConfig cfg = setup.baseline;
    cfg.seed = seed;
    cfg.time_budget = time_budget;
    cfg.target_cost = target_cost;
    if (setup.name == "rrtstar") return rrt_star_plan(sc, cfg, std::move(hooks));
    if (setup.name == "informed_rrtstar") return informed_rrt_star_plan(sc, cfg, std::move(hooks));
    if (setup.name == "rrtsharp") return rrt_sharp_plan(sc, cfg, std::move(hooks));
    throw std::invalid_argument("unknown planner: " + setup.name);
}

}  // namespace relregion
