#include "relregion/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace relregion {

namespace {

using json = nlohmann::ordered_json;

json cost_to_json(Cost c) {
    if (c.is_finite()) return c.value();
    return "inf";
}

Cost cost_from_json(const json& j) {
    if (j.is_string()) return Cost::infinity();
    return Cost(j.get<double>());
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("RELREGION_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? hw : 1;
}

std::string scenario_display_name(const Scenario& sc, const std::string& path) {
    if (!sc.name.empty()) return sc.name;
    return std::filesystem::path(path).stem().string();
}

}  // namespace

BenchConfig bench_config_from_json(const std::string& text, const std::string& profile) {
    json doc = json::parse(text);
    BenchConfig cfg;

    if (profile == "paper") {
        cfg.runs = 100;
        cfg.time_budget = 300.0;
    } else {
        cfg.runs = 20;
        cfg.time_budget = 20.0;
    }

    for (const auto& p : doc.at("scenarios")) cfg.scenario_paths.push_back(p.get<std::string>());
    for (const auto& jp : doc.at("planners")) {
        PlannerSetup setup;
        setup.name = jp.at("name").get<std::string>();
        if (!is_registered_planner(setup.name))
            throw std::invalid_argument("unknown planner in config: " + setup.name);
        const json jc = jp.value("config", json::object());
        if (setup.name == "relregion") {
            PlannerConfig& c = setup.relregion;
            c.batch_size = jc.value("batch_size", c.batch_size);
            c.p_informed = jc.value("p_informed", c.p_informed);
            c.gamma_max = Cost(jc.value("gamma_max", c.gamma_max.value()));
            c.lambda1 = jc.value("lambda1", c.lambda1);
            c.lambda2 = jc.value("lambda2", c.lambda2);
            c.lambda3 = jc.value("lambda3", c.lambda3);
            c.k_rgg = jc.value("k_rgg", c.k_rgg);
            c.sigma_dir = jc.value("sigma_dir", c.sigma_dir);
            c.mag_clamp_lo = jc.value("mag_clamp_lo", c.mag_clamp_lo);
            c.mag_clamp_hi = jc.value("mag_clamp_hi", c.mag_clamp_hi);
        } else {
            BaselineConfig& c = setup.baseline;
            c.steer_range = Cost(jc.value("steer_range", c.steer_range.value()));
            c.goal_bias = jc.value("goal_bias", c.goal_bias);
            c.rewire_scale = jc.value("rewire_scale", c.rewire_scale);
        }
        cfg.planners.push_back(std::move(setup));
    }

    cfg.runs = doc.value("runs", cfg.runs);
    cfg.time_budget = doc.value("time_budget", cfg.time_budget);
    cfg.base_seed = doc.value("base_seed", cfg.base_seed);

    if (doc.contains("target")) {
        const auto& jt = doc["target"];
        const std::string mode = jt.value("mode", "ratio");
        cfg.target.mode = mode == "absolute" ? TargetRule::Mode::Absolute : TargetRule::Mode::Ratio;
        cfg.target.value = jt.at("value").get<double>();
    }
    if (doc.contains("c_opt")) {
        const auto& jc = doc["c_opt"];
        const std::string mode = jc.value("mode", "calibrate");
        if (mode == "fixed") {
            cfg.c_opt.mode = COptSource::Mode::Fixed;
            for (const auto& [name, v] : jc.at("values").items()) {
                cfg.c_opt.fixed[name] = v.get<double>();
            }
        } else {
            cfg.c_opt.mode = COptSource::Mode::Calibrate;
            cfg.c_opt.calibration_budget = jc.value("budget", cfg.c_opt.calibration_budget);
            cfg.c_opt.calibration_seed = jc.value("seed", cfg.c_opt.calibration_seed);
        }
    }

    if (cfg.runs < 1) throw std::invalid_argument("bench: runs must be >= 1");
    if (cfg.target.mode == TargetRule::Mode::Ratio &&
        (cfg.target.value <= 0.0 || cfg.target.value > 1.0))
        throw std::invalid_argument("bench: target ratio must lie in (0, 1]");
    if (cfg.scenario_paths.empty() || cfg.planners.empty())
        throw std::invalid_argument("bench: need at least one scenario and one planner");
    return cfg;
}

BenchConfig bench_config_from_file(const std::string& path, const std::string& profile) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bench config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return bench_config_from_json(ss.str(), profile);
}

Cost calibrate_c_opt(const Scenario& sc, double budget, std::uint64_t seed) {
    BaselineConfig cfg;
    cfg.seed = seed;
    cfg.time_budget = budget;
    const PlanResult result = rrt_star_plan(sc, cfg);
    if (!result.best_cost.is_finite()) throw CalibrationFailed(sc.name);
    return result.best_cost;
}

std::vector<double> aggregation_time_grid(double time_budget) {
    constexpr int kPoints = 200;
    constexpr double kStart = 0.01;
    std::vector<double> grid;
    grid.reserve(kPoints);
    if (time_budget <= kStart) {
        for (int i = 1; i <= kPoints; ++i)
            grid.push_back(time_budget * static_cast<double>(i) / kPoints);
        return grid;
    }
    const double span = std::log(time_budget) - std::log(kStart);
    for (int i = 1; i <= kPoints; ++i) {
        grid.push_back(std::exp(std::log(kStart) + span * static_cast<double>(i) / kPoints));
    }
    grid.back() = time_budget;
    return grid;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<CellAggregate> aggregate_records(const std::vector<RunRecord>& records, int runs,
                                             double time_budget) {
    // Cells keyed by (scenario, planner), first-appearance order.
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& r : records) {
        const std::pair<std::string, std::string> key{r.scenario, r.planner};
        if (std::find(cells.begin(), cells.end(), key) == cells.end()) cells.push_back(key);
    }

    const std::vector<double> grid = aggregation_time_grid(time_budget);
    std::vector<CellAggregate> out;
    for (const auto& [scenario, planner] : cells) {
        CellAggregate agg;
        agg.scenario = scenario;
        agg.planner = planner;

        std::vector<const RunRecord*> cell_runs;
        for (const auto& r : records) {
            if (r.scenario == scenario && r.planner == planner) cell_runs.push_back(&r);
        }
        const double denom = static_cast<double>(runs);

        agg.draw_start = time_budget;
        agg.draw_end = time_budget;
        bool have_start = false;
        bool have_end = false;
        for (const double t : grid) {
            std::vector<double> costs;
            std::size_t at_target = 0;
            for (const RunRecord* r : cell_runs) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& ev : r->result.trace) {
                    if (ev.elapsed_s <= t) best = std::min(best, ev.cost.value());
                }
                if (std::isfinite(best)) costs.push_back(best);
                if (r->time_to_target && *r->time_to_target <= t) ++at_target;
            }
            if (!have_start && static_cast<double>(costs.size()) >= 0.5 * denom) {
                agg.draw_start = t;
                have_start = true;
            }
            if (!have_end && static_cast<double>(at_target) >= 0.95 * denom) {
                agg.draw_end = t;
                have_end = true;
            }
            if (costs.empty()) continue;
            std::sort(costs.begin(), costs.end());
            CurvePoint pt;
            pt.t = t;
            pt.median = quantile_sorted(costs, 0.5);
            pt.q25 = quantile_sorted(costs, 0.25);
            pt.q75 = quantile_sorted(costs, 0.75);
            pt.solved = costs.size();
            pt.success_fraction = static_cast<double>(costs.size()) / denom;
            agg.curve.push_back(pt);
        }

        std::vector<double> finish_times;
        for (const RunRecord* r : cell_runs) {
            if (r->time_to_target) {
                finish_times.push_back(*r->time_to_target);
            } else {
                ++agg.time_to_target.dnf;
            }
        }
        agg.time_to_target.finished = finish_times.size();
        if (!finish_times.empty()) {
            std::sort(finish_times.begin(), finish_times.end());
            agg.time_to_target.median = quantile_sorted(finish_times, 0.5);
            agg.time_to_target.q25 = quantile_sorted(finish_times, 0.25);
            agg.time_to_target.q75 = quantile_sorted(finish_times, 0.75);
        }
        out.push_back(std::move(agg));
    }
    return out;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
    BenchReport report;
    report.runs = cfg.runs;
    report.time_budget = cfg.time_budget;
    report.base_seed = cfg.base_seed;

    std::vector<Scenario> scenarios;
    for (const auto& path : cfg.scenario_paths) {
        Scenario sc = load_scenario_file(path);
        if (sc.name.empty()) sc.name = scenario_display_name(sc, path);
        report.scenarios.push_back(sc.name);
        scenarios.push_back(std::move(sc));
    }
    for (const auto& p : cfg.planners) report.planners.push_back(p.name);

    for (const Scenario& sc : scenarios) {
        double target;
        if (cfg.target.mode == TargetRule::Mode::Absolute) {
            target = cfg.target.value;
        } else {
            double c_opt;
            if (cfg.c_opt.mode == COptSource::Mode::Fixed) {
                const auto it = cfg.c_opt.fixed.find(sc.name);
                if (it == cfg.c_opt.fixed.end())
                    throw std::invalid_argument("bench: no fixed c_opt for scenario " + sc.name);
                c_opt = it->second;
            } else {
                c_opt = calibrate_c_opt(sc, cfg.c_opt.calibration_budget,
                                        cfg.c_opt.calibration_seed)
                            .value();
            }
            report.c_opt[sc.name] = c_opt;
            target = cfg.target.value * c_opt;
        }
        report.targets[sc.name] = target;
    }

    struct Task {
        std::size_t scenario_index;
        std::size_t planner_index;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
        for (std::size_t pi = 0; pi < cfg.planners.size(); ++pi) {
            for (int run = 0; run < cfg.runs; ++run) tasks.push_back({si, pi, run});
        }
    }
    report.records.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            const Scenario& sc = scenarios[task.scenario_index];
            const PlannerSetup& setup = cfg.planners[task.planner_index];
            const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(task.run);
            const double target = report.targets.at(sc.name);

            RunRecord rec;
            rec.planner = setup.name;
            rec.scenario = sc.name;
            rec.seed = seed;
            rec.target = target;
            try {
                rec.result =
                    run_planner(setup, sc, seed, cfg.time_budget, Cost(target));
                for (const auto& ev : rec.result.trace) {
                    if (ev.cost.value() <= target) {
                        rec.time_to_target = ev.elapsed_s;
                        break;
                    }
                }
            } catch (const std::exception&) {
                rec.result = PlanResult{};
                rec.result.status = PlanStatus::Infeasible;
            }
            report.records[i] = std::move(rec);
        }
    };

    const std::size_t n_threads = std::min(thread_cap(), tasks.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    report.aggregates = aggregate_records(report.records, cfg.runs, cfg.time_budget);
    return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
    out << "planner,scenario,seed,elapsed_s,cost,edge_evals\n";
    char buf[160];
    for (const auto& rec : report.records) {
        for (const auto& ev : rec.result.trace) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%llu,%.6f,%.12g,%llu\n", rec.planner.c_str(),
                          rec.scenario.c_str(), static_cast<unsigned long long>(rec.seed),
                          ev.elapsed_s, ev.cost.value(),
                          static_cast<unsigned long long>(ev.edge_evaluations));
            out << buf;
        }
    }
}

namespace {

json trace_to_json(const std::vector<TraceEvent>& trace) {
    json arr = json::array();
    for (const auto& ev : trace) {
        arr.push_back(json{{"elapsed_s", ev.elapsed_s},
                           {"cost", cost_to_json(ev.cost)},
                           {"edge_evals", ev.edge_evaluations}});
    }
    return arr;
}

std::vector<TraceEvent> trace_from_json(const json& arr) {
    std::vector<TraceEvent> trace;
    for (const auto& j : arr) {
        trace.push_back(TraceEvent{j.at("elapsed_s").get<double>(), cost_from_json(j.at("cost")),
                                   j.at("edge_evals").get<std::uint64_t>()});
    }
    return trace;
}

json state_array(const State& x) {
    return json::array({x.translation.x, x.translation.y, x.translation.z, x.angle, x.rotation.w,
                        x.rotation.x, x.rotation.y, x.rotation.z});
}

State state_from_array(const json& j) {
    State x;
    x.translation = {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
    x.angle = j.at(3).get<double>();
    x.rotation = {j.at(4).get<double>(), j.at(5).get<double>(), j.at(6).get<double>(),
                  j.at(7).get<double>()};
    return x;
}

const char* status_name(PlanStatus s) { return to_string(s); }

PlanStatus status_from_name(const std::string& s) {
    if (s == "solved") return PlanStatus::Solved;
    if (s == "target_reached") return PlanStatus::TargetReached;
    if (s == "infeasible") return PlanStatus::Infeasible;
    return PlanStatus::Timeout;
}

}  // namespace

std::string report_to_json(const BenchReport& report) {
    json doc;
    doc["scenarios"] = report.scenarios;
    doc["planners"] = report.planners;
    doc["runs"] = report.runs;
    doc["time_budget"] = report.time_budget;
    doc["base_seed"] = report.base_seed;
    doc["c_opt"] = report.c_opt;
    doc["targets"] = report.targets;

    json records = json::array();
    for (const auto& rec : report.records) {
        json jr;
        jr["planner"] = rec.planner;
        jr["scenario"] = rec.scenario;
        jr["seed"] = rec.seed;
        jr["target"] = rec.target;
        jr["status"] = status_name(rec.result.status);
        jr["best_cost"] = cost_to_json(rec.result.best_cost);
        jr["time_to_target"] = rec.time_to_target ? json(*rec.time_to_target) : json(nullptr);
        jr["trace"] = trace_to_json(rec.result.trace);
        json path = json::array();
        for (const auto& st : rec.result.path) path.push_back(state_array(st));
        jr["path"] = path;
        jr["counters"] = {{"edge_evaluations", rec.result.counters.edge_evaluations},
                          {"state_checks", rec.result.counters.state_checks},
                          {"samples_drawn", rec.result.counters.samples_drawn},
                          {"iterations", rec.result.counters.iterations}};
        records.push_back(std::move(jr));
    }
    doc["records"] = std::move(records);

    json aggs = json::array();
    for (const auto& agg : report.aggregates) {
        json ja;
        ja["planner"] = agg.planner;
        ja["scenario"] = agg.scenario;
        ja["draw_start"] = agg.draw_start;
        ja["draw_end"] = agg.draw_end;
        json curve = json::array();
        for (const auto& pt : agg.curve) {
            curve.push_back(json{{"t", pt.t},
                                 {"median", pt.median},
                                 {"q25", pt.q25},
                                 {"q75", pt.q75},
                                 {"solved", pt.solved},
                                 {"success_fraction", pt.success_fraction}});
        }
        ja["curve"] = std::move(curve);
        const auto& tt = agg.time_to_target;
        ja["time_to_target"] = {{"median", tt.median ? json(*tt.median) : json(nullptr)},
                                {"q25", tt.q25 ? json(*tt.q25) : json(nullptr)},
                                {"q75", tt.q75 ? json(*tt.q75) : json(nullptr)},
                                {"finished", tt.finished},
                                {"dnf", tt.dnf}};
        aggs.push_back(std::move(ja));
    }
    doc["aggregates"] = std::move(aggs);
    return doc.dump(2) + "\n";
}

BenchReport report_from_json(const std::string& text) {
    const json doc = json::parse(text);
    BenchReport report;
    report.scenarios = doc.at("scenarios").get<std::vector<std::string>>();
    report.planners = doc.at("planners").get<std::vector<std::string>>();
    report.runs = doc.at("runs").get<int>();
    report.time_budget = doc.at("time_budget").get<double>();
    report.base_seed = doc.at("base_seed").get<std::uint64_t>();
    report.c_opt = doc.at("c_opt").get<std::map<std::string, double>>();
    report.targets = doc.at("targets").get<std::map<std::string, double>>();

    for (const auto& jr : doc.at("records")) {
        RunRecord rec;
        rec.planner = jr.at("planner").get<std::string>();
        rec.scenario = jr.at("scenario").get<std::string>();
        rec.seed = jr.at("seed").get<std::uint64_t>();
        rec.target = jr.at("target").get<double>();
        rec.result.status = status_from_name(jr.at("status").get<std::string>());
        rec.result.best_cost = cost_from_json(jr.at("best_cost"));
        if (!jr.at("time_to_target").is_null())
            rec.time_to_target = jr.at("time_to_target").get<double>();
        rec.result.trace = trace_from_json(jr.at("trace"));
        for (const auto& js : jr.at("path")) rec.result.path.push_back(state_from_array(js));
        const auto& jc = jr.at("counters");
        rec.result.counters.edge_evaluations = jc.at("edge_evaluations").get<std::uint64_t>();
        rec.result.counters.state_checks = jc.at("state_checks").get<std::uint64_t>();
        rec.result.counters.samples_drawn = jc.at("samples_drawn").get<std::uint64_t>();
        rec.result.counters.iterations = jc.at("iterations").get<std::uint64_t>();
        report.records.push_back(std::move(rec));
    }

    for (const auto& ja : doc.at("aggregates")) {
        CellAggregate agg;
        agg.planner = ja.at("planner").get<std::string>();
        agg.scenario = ja.at("scenario").get<std::string>();
        agg.draw_start = ja.at("draw_start").get<double>();
        agg.draw_end = ja.at("draw_end").get<double>();
        for (const auto& jp : ja.at("curve")) {
            CurvePoint pt;
            pt.t = jp.at("t").get<double>();
            pt.median = jp.at("median").get<double>();
            pt.q25 = jp.at("q25").get<double>();
            pt.q75 = jp.at("q75").get<double>();
            pt.solved = jp.at("solved").get<std::size_t>();
            pt.success_fraction = jp.at("success_fraction").get<double>();
            agg.curve.push_back(pt);
        }
        const auto& jt = ja.at("time_to_target");
        if (!jt.at("median").is_null()) agg.time_to_target.median = jt.at("median").get<double>();
        if (!jt.at("q25").is_null()) agg.time_to_target.q25 = jt.at("q25").get<double>();
        if (!jt.at("q75").is_null()) agg.time_to_target.q75 = jt.at("q75").get<double>();
        agg.time_to_target.finished = jt.at("finished").get<std::size_t>();
        agg.time_to_target.dnf = jt.at("dnf").get<std::size_t>();
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

void emit_report(const BenchReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    const auto wants = [&](const char* f) {
        return std::find(formats.begin(), formats.end(), f) != formats.end();
    };
    const auto write_file = [&](const fs::path& path, const std::string& content) {
        std::ofstream out(path);
        if (!out) throw IoError(path.string());
        out << content;
        if (!out) throw IoError(path.string());
    };

    if (wants("csv")) {
        std::ostringstream ss;
        write_csv(report, ss);
        write_file(fs::path(out_dir) / "bench.csv", ss.str());
    }
    if (wants("json")) {
        write_file(fs::path(out_dir) / "bench.json", report_to_json(report));
    }
    if (wants("svg")) {
        for (const auto& scenario : report.scenarios) {
            write_file(fs::path(out_dir) / ("cost_vs_time_" + scenario + ".svg"),
                       render_cost_vs_time_svg(report, scenario));
            write_file(fs::path(out_dir) / ("time_to_target_" + scenario + ".svg"),
                       render_time_to_target_svg(report, scenario));
        }
    }
}

}  // namespace relregion
