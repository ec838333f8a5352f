#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "relregion/gnat.hpp"

using namespace relregion;

namespace {

SpaceDef plane() {
    SpaceDef s;
    s.type = SpaceType::SE2;
    s.bounds = {{{0.0, 100.0}, {0.0, 100.0}, {0.0, 0.0}}};
    return s;
}

std::vector<State> random_states(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const SpaceDef s = plane();
    std::vector<State> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_uniform(s, rng));
    return out;
}

}  // namespace

static void BM_GnatNearest(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pts = random_states(n, 11);
    const auto queries = random_states(256, 12);
    GnatIndex index(plane());
    for (std::size_t i = 0; i < pts.size(); ++i) index.insert(i, pts[i]);
    std::size_t qi = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.nearest(queries[qi++ % queries.size()]));
    }
}
BENCHMARK(BM_GnatNearest)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_LinearNearest(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pts = random_states(n, 11);
    const auto queries = random_states(256, 12);
    const SpaceDef s = plane();
    std::size_t qi = 0;
    for (auto _ : state) {
        const State& q = queries[qi++ % queries.size()];
        std::size_t best = 0;
        Cost best_d = Cost::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Cost d = distance(pts[i], q, s);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        benchmark::DoNotOptimize(best);
    }
}
BENCHMARK(BM_LinearNearest)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_GnatKNearest(benchmark::State& state) {
    const auto pts = random_states(20000, 21);
    const auto queries = random_states(256, 22);
    GnatIndex index(plane());
    for (std::size_t i = 0; i < pts.size(); ++i) index.insert(i, pts[i]);
    const auto k = static_cast<std::size_t>(state.range(0));
    std::size_t qi = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.k_nearest(queries[qi++ % queries.size()], k));
    }
}
BENCHMARK(BM_GnatKNearest)->Arg(8)->Arg(32);

static void BM_GnatInsert(benchmark::State& state) {
    const auto pts = random_states(100000, 31);
    for (auto _ : state) {
        state.PauseTiming();
        GnatIndex index(plane());
        state.ResumeTiming();
        for (std::size_t i = 0; i < pts.size(); ++i) index.insert(i, pts[i]);
        benchmark::DoNotOptimize(index.size());
    }
}
BENCHMARK(BM_GnatInsert)->Unit(benchmark::kMillisecond);
