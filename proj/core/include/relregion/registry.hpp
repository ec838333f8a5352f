#pragma once

#include <string>
#include <vector>

#include "relregion/baselines.hpp"
#include "relregion/planner.hpp"
#include "relregion/scenario.hpp"

namespace relregion {

/// Per-planner tuning carried by the bench pipeline; the entry named by
/// `name` dispatches to the matching planner with the matching config.
struct PlannerSetup {
    std::string name;  // "relregion" | "rrtstar" | "informed_rrtstar" | "rrtsharp"
    PlannerConfig relregion;
    BaselineConfig baseline;
};

[[nodiscard]] std::vector<std::string> registered_planner_names();
[[nodiscard]] bool is_registered_planner(const std::string& name);

/// Runs the named planner with seed/budget/target applied on top of the
/// setup's stored config. Throws std::invalid_argument for unknown names.
PlanResult run_planner(const PlannerSetup& setup, const Scenario& sc, std::uint64_t seed,
                       double time_budget, std::optional<Cost> target_cost,
                       PlannerHooks hooks = {});

}  // namespace relregion
