#include "relregion/search_graph.hpp"

#include <algorithm>
#include <queue>

namespace relregion {

SampleStore::SampleStore(const SpaceDef& space) : space_(space), index_(space) {}

SampleId SampleStore::add(const State& x) {
    const SampleId id = next_id_++;
    Sample s;
    s.id = id;
    s.state = x;
    samples_.emplace(id, std::move(s));
    index_.insert(id, x);
    return id;
}

void SampleStore::remove(SampleId id) {
    const Sample& s = samples_.at(id);
    // Drop incident evaluated edges and tree links before the sample goes.
    for (const auto& [nbr, cost] : s.valid_edges) {
        if (auto it = samples_.find(nbr); it != samples_.end()) it->second.valid_edges.erase(id);
    }
    if (s.parent_fwd) {
        if (auto it = samples_.find(*s.parent_fwd); it != samples_.end()) {
            it->second.children_fwd.erase(id);
            it->second.n_out = static_cast<std::uint32_t>(it->second.children_fwd.size());
        }
    }
    for (const SampleId child : s.children_fwd) {
        if (auto it = samples_.find(child); it != samples_.end()) it->second.parent_fwd.reset();
    }
    std::erase_if(invalid_edges_,
                  [id](const auto& e) { return e.first == id || e.second == id; });
    index_.remove(id);
    samples_.erase(id);
}

void SampleStore::add_valid_edge(SampleId a, SampleId b, Cost c) {
    samples_.at(a).valid_edges[b] = c;
    samples_.at(b).valid_edges[a] = c;
}

void SampleStore::mark_invalid_edge(SampleId a, SampleId b) {
    invalid_edges_.insert(std::minmax(a, b));
}

bool SampleStore::is_known_invalid(SampleId a, SampleId b) const {
    return invalid_edges_.contains(std::minmax(a, b));
}

std::optional<Cost> SampleStore::known_valid_cost(SampleId a, SampleId b) const {
    const Sample& s = samples_.at(a);
    if (auto it = s.valid_edges.find(b); it != s.valid_edges.end()) return it->second;
    return std::nullopt;
}

void SampleStore::detach_from_forward_tree(SampleId id) {
    Sample& s = samples_.at(id);
    if (s.parent_fwd) {
        if (auto it = samples_.find(*s.parent_fwd); it != samples_.end()) {
            it->second.children_fwd.erase(id);
            it->second.n_out = static_cast<std::uint32_t>(it->second.children_fwd.size());
        }
        s.parent_fwd.reset();
    }
    for (const SampleId child : s.children_fwd) {
        if (auto it = samples_.find(child); it != samples_.end()) it->second.parent_fwd.reset();
    }
    s.children_fwd.clear();
    s.n_out = 0;
    s.g = Cost::infinity();
    s.in_forward = false;
    ++s.version;
}

void propagate_cost_updates(SampleStore& store, const std::vector<SampleId>& seeds,
                            const std::function<Cost(const Sample&)>& queue_key,
                            const std::function<void(SampleId)>& on_improved) {
    using Entry = std::pair<Cost, SampleId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (const SampleId id : seeds) {
        if (store.contains(id)) queue.emplace(queue_key(store.at(id)), id);
    }

    while (!queue.empty()) {
        const auto [key, id] = queue.top();
        queue.pop();
        if (!store.contains(id)) continue;
        Sample& v = store.at(id);
        if (key > queue_key(v)) continue;  // superseded entry
        for (const auto& [nbr_id, edge_cost] : v.valid_edges) {
            Sample& w = store.at(nbr_id);
            const Cost cand = v.g + edge_cost;
            if (cand < w.g) {
                if (w.parent_fwd) {
                    Sample& old_parent = store.at(*w.parent_fwd);
                    old_parent.children_fwd.erase(nbr_id);
                    old_parent.n_out = static_cast<std::uint32_t>(old_parent.children_fwd.size());
                }
                w.parent_fwd = id;
                v.children_fwd.insert(nbr_id);
                v.n_out = static_cast<std::uint32_t>(v.children_fwd.size());
                w.g = cand;
                w.in_forward = true;
                ++w.version;
                if (on_improved) on_improved(nbr_id);
                queue.emplace(queue_key(w), nbr_id);
            }
        }
    }
}

}  // namespace relregion
