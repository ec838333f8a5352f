#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "relregion/cost.hpp"
#include "relregion/gnat.hpp"
#include "relregion/state_space.hpp"

namespace relregion {

using SampleId = std::uint64_t;

/// An RGG node shared by the planner and the tree-based baselines: state,
/// forward cost-to-come, reverse cost-to-go, tree links and bookkeeping
/// counters. `version` is bumped whenever g or h_rev changes so priority-queue
/// entries can detect staleness.
struct Sample {
    SampleId id = 0;
    State state;
    Cost g = Cost::infinity();      // cost-to-come via the forward tree
    Cost h_rev = Cost::infinity();  // cost-to-go from the current reverse tree
    std::optional<SampleId> parent_fwd;
    std::set<SampleId> children_fwd;
    std::optional<SampleId> reverse_parent;  // next hop toward the goal
    std::uint32_t n_selected = 0;            // times used as an expansion seed
    std::uint32_t n_out = 0;                 // outgoing forward edges
    bool in_forward = false;
    bool in_reverse = false;
    bool is_goal = false;
    std::uint32_t version = 0;

    /// Evaluated collision-free edges incident to this sample.
    std::map<SampleId, Cost> valid_edges;
};

/// Owns all samples of a planner instance plus the GNAT index over their
/// states. Iteration order is id order, so traversals are deterministic.
class SampleStore {
public:
    explicit SampleStore(const SpaceDef& space);

    SampleId add(const State& x);
    void remove(SampleId id);

    [[nodiscard]] bool contains(SampleId id) const { return samples_.contains(id); }
    [[nodiscard]] Sample& at(SampleId id) { return samples_.at(id); }
    [[nodiscard]] const Sample& at(SampleId id) const { return samples_.at(id); }
    [[nodiscard]] std::size_t size() const { return samples_.size(); }

    [[nodiscard]] auto begin() { return samples_.begin(); }
    [[nodiscard]] auto end() { return samples_.end(); }
    [[nodiscard]] auto begin() const { return samples_.begin(); }
    [[nodiscard]] auto end() const { return samples_.end(); }

    [[nodiscard]] GnatIndex& index() { return index_; }
    [[nodiscard]] const GnatIndex& index() const { return index_; }
    [[nodiscard]] const SpaceDef& space() const { return space_; }

    void add_valid_edge(SampleId a, SampleId b, Cost c);
    void mark_invalid_edge(SampleId a, SampleId b);
    [[nodiscard]] bool is_known_invalid(SampleId a, SampleId b) const;
    [[nodiscard]] std::optional<Cost> known_valid_cost(SampleId a, SampleId b) const;

    /// Detach a sample from the forward tree (clears parent/child links and
    /// resets g); the sample itself stays in the store.
    void detach_from_forward_tree(SampleId id);

private:
    SpaceDef space_;
    std::map<SampleId, Sample> samples_;
    GnatIndex index_;
    std::set<std::pair<SampleId, SampleId>> invalid_edges_;
    SampleId next_id_ = 0;
};

/// Key-ordered relaxation of cost-to-come decreases over the evaluated
/// collision-free edge graph. After it returns, g of every vertex reachable
/// from the seeds equals its shortest-path cost over that graph. `queue_key`
/// orders the work queue (g + heuristic); `on_improved` fires after each g
/// decrease.
void propagate_cost_updates(SampleStore& store, const std::vector<SampleId>& seeds,
                            const std::function<Cost(const Sample&)>& queue_key,
                            const std::function<void(SampleId)>& on_improved = {});

}  // namespace relregion
