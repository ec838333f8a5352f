#include <benchmark/benchmark.h>

#include <string>

#include "relregion/baselines.hpp"
#include "relregion/planner.hpp"
#include "relregion/scenario.hpp"

using namespace relregion;

namespace {

Scenario load(const std::string& name) {
    return load_scenario_file(std::string(RELREGION_SCENARIO_DIR) + "/" + name);
}

}  // namespace

static void BM_DistanceSE2(benchmark::State& state) {
    const Scenario sc = load("maze2d.json");
    Rng rng(3);
    const State a = sample_uniform(sc.space, rng);
    const State b = sample_uniform(sc.space, rng);
    for (auto _ : state) benchmark::DoNotOptimize(distance(a, b, sc.space));
}
BENCHMARK(BM_DistanceSE2);

static void BM_MotionCheckMaze(benchmark::State& state) {
    const Scenario sc = load("maze2d.json");
    Rng rng(5);
    const State a = sample_uniform(sc.space, rng);
    const State b = sample_uniform(sc.space, rng);
    for (auto _ : state) benchmark::DoNotOptimize(sc.is_motion_valid(a, b));
}
BENCHMARK(BM_MotionCheckMaze);

static void BM_InformedSample(benchmark::State& state) {
    const Scenario sc = load("empty2d.json");
    Rng rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_informed(sc.space, sc.start, sc.goal_center, Cost(9.0), rng));
    }
}
BENCHMARK(BM_InformedSample);

static void BM_PlannerBatches(benchmark::State& state) {
    const Scenario sc = load("maze2d.json");
    for (auto _ : state) {
        PlannerConfig cfg;
        cfg.seed = 42;
        cfg.batch_size = 100;
        cfg.max_iterations = static_cast<std::uint64_t>(state.range(0));
        RelRegionPlanner planner(sc, cfg);
        benchmark::DoNotOptimize(planner.plan());
    }
}
BENCHMARK(BM_PlannerBatches)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_RrtStarIterations(benchmark::State& state) {
    const Scenario sc = load("maze2d.json");
    for (auto _ : state) {
        BaselineConfig cfg;
        cfg.seed = 42;
        cfg.max_iterations = static_cast<std::uint64_t>(state.range(0));
        benchmark::DoNotOptimize(rrt_star_plan(sc, cfg));
    }
}
BENCHMARK(BM_RrtStarIterations)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
