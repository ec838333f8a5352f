#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relregion/bench.hpp"
#include "relregion/registry.hpp"

namespace {

using relregion::Cost;
using relregion::PlanResult;
using relregion::PlanStatus;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoSolution = 2;

std::string result_to_json(const PlanResult& result, const std::string& planner,
                           const std::string& scenario, std::uint64_t seed) {
    nlohmann::ordered_json doc;
    doc["planner"] = planner;
    doc["scenario"] = scenario;
    doc["seed"] = seed;
    doc["status"] = relregion::to_string(result.status);
    doc["best_cost"] =
        result.best_cost.is_finite() ? nlohmann::ordered_json(result.best_cost.value())
                                     : nlohmann::ordered_json("inf");
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto& ev : result.trace) {
        trace.push_back({{"elapsed_s", ev.elapsed_s},
                         {"cost", ev.cost.value()},
                         {"edge_evals", ev.edge_evaluations}});
    }
    doc["trace"] = trace;
    nlohmann::ordered_json path = nlohmann::ordered_json::array();
    for (const auto& st : result.path) {
        path.push_back({st.translation.x, st.translation.y, st.translation.z, st.angle,
                        st.rotation.w, st.rotation.x, st.rotation.y, st.rotation.z});
    }
    doc["path"] = path;
    doc["counters"] = {{"edge_evaluations", result.counters.edge_evaluations},
                       {"state_checks", result.counters.state_checks},
                       {"samples_drawn", result.counters.samples_drawn},
                       {"iterations", result.counters.iterations}};
    return doc.dump(2) + "\n";
}

int cmd_plan(const std::string& scenario_path, const std::string& planner, std::uint64_t seed,
             double budget, std::optional<double> target, std::optional<double> target_ratio,
             double calibration_budget, const std::string& out_path) {
    const relregion::Scenario sc = relregion::load_scenario_file(scenario_path);

    std::optional<Cost> target_cost;
    if (target) {
        target_cost = Cost(*target);
    } else if (target_ratio) {
        const Cost c_opt = relregion::calibrate_c_opt(sc, calibration_budget);
        target_cost = Cost(*target_ratio * c_opt.value());
        std::printf("calibrated c_opt = %.6f, target = %.6f\n", c_opt.value(),
                    target_cost->value());
    }

    relregion::PlannerSetup setup;
    setup.name = planner;
    const PlanResult result = relregion::run_planner(setup, sc, seed, budget, target_cost);

    std::printf("status: %s\n", relregion::to_string(result.status));
    if (result.best_cost.is_finite()) {
        std::printf("best cost: %.6f\n", result.best_cost.value());
        std::printf("path states: %zu\n", result.path.size());
    } else {
        std::printf("best cost: inf (no solution)\n");
    }
    std::printf("edge evaluations: %llu\n",
                static_cast<unsigned long long>(result.counters.edge_evaluations));
    std::printf("iterations: %llu\n",
                static_cast<unsigned long long>(result.counters.iterations));

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
            return kExitError;
        }
        out << result_to_json(result, planner, sc.name, seed);
    }
    return result.best_cost.is_finite() ? kExitOk : kExitNoSolution;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir,
              const std::string& profile) {
    const relregion::BenchConfig cfg = relregion::bench_config_from_file(config_path, profile);
    const relregion::BenchReport report = relregion::run_benchmark(cfg);
    relregion::emit_report(report, out_dir);

    std::size_t finished = 0;
    for (const auto& rec : report.records) {
        if (rec.time_to_target) ++finished;
    }
    std::printf("%zu records (%zu reached target), outputs in %s\n", report.records.size(),
                finished, out_dir.c_str());
    return finished > 0 ? kExitOk : kExitNoSolution;
}

int cmd_calibrate(const std::string& scenario_path, double budget) {
    const relregion::Scenario sc = relregion::load_scenario_file(scenario_path);
    const Cost c_opt = relregion::calibrate_c_opt(sc, budget);
    std::printf("c_opt(%s) = %.9f\n", sc.name.c_str(), c_opt.value());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relregion: relevant-region sampling planner and benchmark harness"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string planner = "relregion";
    std::uint64_t seed = 0;
    double budget = 10.0;
    std::optional<double> target;
    std::optional<double> target_ratio;
    double calibration_budget = 60.0;
    std::string out_path;

    auto* plan = app.add_subcommand("plan", "Run one planner on one scenario");
    plan->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    plan->add_option("--planner", planner,
                     "one of: relregion, rrtstar, informed_rrtstar, rrtsharp");
    plan->add_option("--seed", seed, "random seed");
    plan->add_option("--budget", budget, "time budget in seconds");
    auto* topt = plan->add_option("--target", target, "stop at this absolute cost");
    auto* ropt =
        plan->add_option("--target-ratio", target_ratio, "stop at ratio * calibrated c_opt");
    topt->excludes(ropt);
    plan->add_option("--calibration-budget", calibration_budget,
                     "RRT* budget for --target-ratio calibration");
    plan->add_option("--out", out_path, "write the result as JSON");

    std::string config_path;
    std::string out_dir = "bench_out";
    std::string profile = "ci";
    auto* bench = app.add_subcommand("bench", "Run the benchmark protocol from a config");
    bench->add_option("--config", config_path, "bench config JSON")->required();
    bench->add_option("--out-dir", out_dir, "output directory");
    bench->add_option("--profile", profile, "ci or paper")
        ->check(CLI::IsMember({"ci", "paper"}));

    double calib_budget = 60.0;
    auto* calibrate = app.add_subcommand("calibrate", "Estimate c_opt with a long RRT* run");
    calibrate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    calibrate->add_option("--budget", calib_budget, "calibration budget in seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) {
            if (!relregion::is_registered_planner(planner)) {
                std::fprintf(stderr, "error: unknown planner '%s'\n", planner.c_str());
                return kExitError;
            }
            return cmd_plan(scenario_path, planner, seed, budget, target, target_ratio,
                            calibration_budget, out_path);
        }
        if (bench->parsed()) return cmd_bench(config_path, out_dir, profile);
        if (calibrate->parsed()) return cmd_calibrate(scenario_path, calib_budget);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
