#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relregion/registry.hpp"
#include "relregion/scenario.hpp"

namespace relregion {

struct CalibrationFailed : std::runtime_error {
    explicit CalibrationFailed(const std::string& scenario)
        : std::runtime_error("calibration found no solution for scenario: " + scenario) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& path) : std::runtime_error("cannot write: " + path) {}
};

struct TargetRule {
    enum class Mode { Absolute, Ratio };
    Mode mode = Mode::Ratio;
    double value = 0.92;  // absolute cost, or ratio of c_opt
};

struct COptSource {
    enum class Mode { Calibrate, Fixed };
    Mode mode = Mode::Calibrate;
    std::map<std::string, double> fixed;  // scenario name -> c_opt
    double calibration_budget = 60.0;
    std::uint64_t calibration_seed = 9001;
};

struct BenchConfig {
    std::vector<std::string> scenario_paths;
    std::vector<PlannerSetup> planners;
    int runs = 20;
    double time_budget = 20.0;
    TargetRule target;
    COptSource c_opt;
    std::uint64_t base_seed = 1;
};

/// Parses a bench config document. `profile` supplies defaults for runs and
/// time budget when the document omits them: "ci" is 20 runs / 20 s,
/// "paper" is 100 runs / 300 s.
BenchConfig bench_config_from_json(const std::string& text, const std::string& profile = "ci");
BenchConfig bench_config_from_file(const std::string& path, const std::string& profile = "ci");

struct RunRecord {
    std::string planner;
    std::string scenario;
    std::uint64_t seed = 0;
    double target = 0.0;
    PlanResult result;
    std::optional<double> time_to_target;  // nullopt = DNF

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct CurvePoint {
    double t = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t solved = 0;       // runs with a solution by t
    double success_fraction = 0;  // solved / runs

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct TimeToTargetStats {
    std::optional<double> median;
    std::optional<double> q25;
    std::optional<double> q75;
    std::size_t finished = 0;
    std::size_t dnf = 0;

    friend bool operator==(const TimeToTargetStats&, const TimeToTargetStats&) = default;
};

struct CellAggregate {
    std::string planner;
    std::string scenario;
    std::vector<CurvePoint> curve;  // gridpoints where at least one run solved
    double draw_start = 0.0;        // first t with >= 50% of runs solved
    double draw_end = 0.0;          // first t with >= 95% of runs at target
    TimeToTargetStats time_to_target;

    friend bool operator==(const CellAggregate&, const CellAggregate&) = default;
};

struct BenchReport {
    std::vector<std::string> scenarios;
    std::vector<std::string> planners;
    int runs = 0;
    double time_budget = 0.0;
    std::uint64_t base_seed = 0;
    std::map<std::string, double> c_opt;    // per scenario (ratio targets only)
    std::map<std::string, double> targets;  // per scenario, resolved
    std::vector<RunRecord> records;
    std::vector<CellAggregate> aggregates;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// One long deterministic reference run: the incumbent cost reached by RRT*
/// within the calibration budget. Throws CalibrationFailed when no solution
/// is found.
Cost calibrate_c_opt(const Scenario& sc, double budget = 60.0, std::uint64_t seed = 9001);

/// Executes every (scenario, planner, run) cell with seed = base_seed + run
/// index; per-run failures become DNF records. Runs execute in parallel up to
/// the RELREGION_THREADS cap; record order is independent of scheduling.
BenchReport run_benchmark(const BenchConfig& cfg);

/// Pure function of the records: quantile curves over the log time grid plus
/// time-to-target statistics per (scenario, planner) cell.
std::vector<CellAggregate> aggregate_records(const std::vector<RunRecord>& records, int runs,
                                             double time_budget);

/// Log-spaced aggregation grid over (10 ms, budget].
std::vector<double> aggregation_time_grid(double time_budget);

/// Linear-interpolation quantile of a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double p);

void write_csv(const BenchReport& report, std::ostream& out);
std::string report_to_json(const BenchReport& report);
BenchReport report_from_json(const std::string& text);

/// Writes bench.csv / bench.json / per-scenario SVG charts into out_dir.
/// `formats` is any subset of {"csv", "json", "svg"}.
void emit_report(const BenchReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats = {"csv", "json", "svg"});

// SVG renderers (static charts, fixed viewBox).
std::string render_cost_vs_time_svg(const BenchReport& report, const std::string& scenario);
std::string render_time_to_target_svg(const BenchReport& report, const std::string& scenario);

}  // namespace relregion
