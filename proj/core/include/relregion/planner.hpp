#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "relregion/cost.hpp"
#include "relregion/scenario.hpp"
#include "relregion/search_graph.hpp"
#include "relregion/state_space.hpp"

namespace relregion {

struct PlannerConfig {
    int batch_size = 100;    // m
    double p_informed = 0.5; // probability of informed (vs relevant) samples
    Cost gamma_max{0.0};     // expansion bound; 0 resolves to 0.1 * diagonal
    double lambda1 = 1.0;    // weight on n_selected
    double lambda2 = 1.0;    // weight on n_out
    double lambda3 = 1.0;    // weight on normalized f-hat
    double k_rgg = 1.0;      // scale on the k-nearest RGG rule
    double sigma_dir = 0.5;  // direction noise, radians
    double mag_clamp_lo = 0.1;
    double mag_clamp_hi = 1.0;
    std::uint64_t seed = 0;
    double time_budget = 10.0;  // seconds
    std::optional<Cost> target_cost;
    /// Deterministic alternative to the wall-clock budget; when set, the batch
    /// loop runs exactly this many iterations (unless the target is reached).
    std::optional<std::uint64_t> max_iterations;
    int max_sample_attempts = 100;

    void validate() const;  // throws std::invalid_argument
};

struct Counters {
    std::uint64_t edge_evaluations = 0;  // is_motion_valid calls
    std::uint64_t state_checks = 0;      // is_state_valid calls on fresh samples
    std::uint64_t samples_drawn = 0;
    std::uint64_t iterations = 0;

    friend bool operator==(const Counters&, const Counters&) = default;
};

struct TraceEvent {
    double elapsed_s = 0.0;
    Cost cost = Cost::infinity();
    std::uint64_t edge_evaluations = 0;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class PlanStatus { Solved, TargetReached, Timeout, Infeasible };

struct PlanResult {
    PlanStatus status = PlanStatus::Timeout;
    Cost best_cost = Cost::infinity();
    std::vector<State> path;
    std::vector<TraceEvent> trace;
    Counters counters;

    friend bool operator==(const PlanResult&, const PlanResult&) = default;
};

const char* to_string(PlanStatus s);

struct PruneEvent {
    State state;
    bool failed_region_test = false;  // otherwise dropped for tree connectivity
    Cost c_cur = Cost::infinity();
};

class RelRegionPlanner;

struct PlannerHooks {
    std::function<void(const TraceEvent&)> on_improvement;
    std::function<void(const RelRegionPlanner&)> after_forward_tree;
    std::function<void(const PruneEvent&)> on_prune;
    std::function<void(const State&)> on_sample;  // fires per accepted sample
};

/// Batch planner with relevant-region direct sampling and adaptive heuristic
/// estimation: cost-to-come from the optimal forward tree, cost-to-go from a
/// lazy reverse Dijkstra tree rebuilt over the RGG each batch without any
/// collision checks. Forward search is queue-driven with postponed edge
/// evaluation, followed by global replanning and pruning.
///
/// An instance is single-threaded; all randomness flows through the seeded
/// generator, so a fixed (scenario, config) pair reproduces the identical
/// search.
class RelRegionPlanner {
public:
    RelRegionPlanner(const Scenario& scenario, const PlannerConfig& cfg, PlannerHooks hooks = {});

    PlanResult plan();

    // -- operation-level entry points (plan() drives these; tests do too) --

    /// Drops samples disconnected from either tree and forward-tree subtrees
    /// that cannot beat the incumbent. Returns the number removed.
    std::size_t prune();

    /// Draws one batch: relevant-region quota first, informed fill after.
    /// Returns the ids of the accepted new samples.
    std::vector<SampleId> sample_batch();

    /// Relevance-weighted vertex queue, lowest weight first.
    [[nodiscard]] std::vector<std::pair<double, SampleId>> weight_vertices() const;

    struct StepEstimate {
        Cost gamma_rel{0.0};
        Vec3 direction;  // unit vector in translation space, toward the goal
    };
    /// Best promising expansion magnitude and direction for a vertex, from the
    /// reverse-tree edge toward the goal. nullopt when the vertex is not
    /// promising (or has no reverse successor to point along).
    [[nodiscard]] std::optional<StepEstimate> estimate_step(const Sample& v) const;

    /// One noisy expansion draw from v; direction rotated by a Gaussian angle,
    /// magnitude scaled by a clamped Gaussian. No validity check.
    State perturbed_expansion(const Sample& v, const StepEstimate& est);

    /// Rebuilds reverse cost-to-go labels by multi-source Dijkstra from the
    /// goal samples over the current RGG; no collision checks.
    void build_reverse_tree();

    /// Queue-driven forward search with postponed edge evaluation (vertex and
    /// edge queues, estimate gates, extend + replan on admitted edges).
    void build_forward_tree();

    // -- introspection --

    [[nodiscard]] const SampleStore& store() const { return store_; }
    [[nodiscard]] SampleStore& store() { return store_; }
    [[nodiscard]] const std::map<SampleId, std::vector<std::pair<SampleId, Cost>>>& rgg_neighbors()
        const {
        return rgg_;
    }
    [[nodiscard]] Cost incumbent_cost() const { return c_cur_; }
    void set_incumbent(Cost c) { c_cur_ = c; }
    [[nodiscard]] SampleId start_id() const { return start_id_; }
    [[nodiscard]] const std::vector<SampleId>& goal_ids() const { return goal_ids_; }
    [[nodiscard]] const Counters& counters() const { return counters_; }
    [[nodiscard]] const Scenario& scenario() const { return scenario_; }
    [[nodiscard]] const PlannerConfig& config() const { return cfg_; }

    /// Rebuilds the symmetric k-nearest RGG adjacency over all samples.
    void rebuild_rgg();

    /// Current incumbent path as sample ids from start to goal; empty when no
    /// solution exists.
    [[nodiscard]] std::vector<SampleId> best_path_ids() const;

    /// k-nearest RGG degree for n samples: ceil(k_rgg * e * (1 + 1/d) * ln n).
    [[nodiscard]] std::size_t rgg_degree(std::size_t n) const;

private:
    Cost evaluate_edge(SampleId a, SampleId b);
    void extend(SampleId parent, SampleId child, Cost edge_cost);
    void replan_from(SampleId improved);
    void update_incumbent();
    void record_improvement();
    double elapsed_seconds() const;
    bool terminate_condition(std::uint64_t iterations_done) const;
    SampleId inject_goal_sample();
    std::vector<State> sample_relevant(std::size_t quota);
    Cost provisional_h_rev(const State& x) const;

    Scenario scenario_;
    PlannerConfig cfg_;
    PlannerHooks hooks_;
    SampleStore store_;
    Rng rng_;
    Cost c_cur_ = Cost::infinity();
    SampleId start_id_ = 0;
    SampleId goal_center_id_ = 0;
    std::vector<SampleId> goal_ids_;
    Counters counters_;
    std::vector<TraceEvent> trace_;
    std::chrono::steady_clock::time_point t0_;
    std::map<SampleId, std::vector<std::pair<SampleId, Cost>>> rgg_;

    // Vertex-queue entries carried across the forward-search loop.
    struct VertexEntry {
        Cost key;
        SampleId id;
        std::uint32_t stamp;
        bool operator>(const VertexEntry& o) const {
            if (key != o.key) return key > o.key;
            return id > o.id;
        }
    };
    std::vector<VertexEntry> qv_;  // heap storage, valid only inside build_forward_tree
    void push_vertex(SampleId id);
};

}  // namespace relregion
