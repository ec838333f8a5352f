#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "relregion/scenario.hpp"
#include "relregion/search_graph.hpp"
#include "relregion/state_space.hpp"

namespace relregion::testing {

inline std::string scenario_path(const std::string& name) {
    return std::string(RELREGION_SCENARIO_DIR) + "/" + name;
}

inline Scenario load_test_scenario(const std::string& name) {
    return load_scenario_file(scenario_path(name));
}

inline SpaceDef se2_space(double lo = -10.0, double hi = 10.0, double w_t = 1.0,
                          double w_r = 1.0) {
    SpaceDef s;
    s.type = SpaceType::SE2;
    s.bounds = {{{lo, hi}, {lo, hi}, {0.0, 0.0}}};
    s.w_t = w_t;
    s.w_r = w_r;
    return s;
}

inline SpaceDef se3_space(double lo = -10.0, double hi = 10.0, double w_t = 1.0,
                          double w_r = 1.0) {
    SpaceDef s;
    s.type = SpaceType::SE3;
    s.bounds = {{{lo, hi}, {lo, hi}, {lo, hi}}};
    s.w_t = w_t;
    s.w_r = w_r;
    return s;
}

/// Linear-scan oracle over (id, state) pairs; mirrors the GNAT contracts.
struct ScanOracle {
    const SpaceDef& space;
    std::map<std::uint64_t, State> items;

    std::vector<std::pair<double, std::uint64_t>> all_sorted(const State& q) const {
        std::vector<std::pair<double, std::uint64_t>> out;
        for (const auto& [id, st] : items) out.emplace_back(distance(st, q, space).value(), id);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::uint64_t> k_nearest(const State& q, std::size_t k) const {
        auto sorted = all_sorted(q);
        if (sorted.size() > k) sorted.resize(k);
        std::vector<std::uint64_t> ids;
        for (const auto& [d, id] : sorted) ids.push_back(id);
        return ids;
    }

    std::vector<std::uint64_t> range(const State& q, double r) const {
        std::vector<std::uint64_t> ids;
        for (const auto& [id, st] : items) {
            if (distance(st, q, space).value() <= r) ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }
};

/// Brute-force multi-source Dijkstra over an explicit adjacency; the oracle
/// for reverse-tree labels and forward-tree optimality.
inline std::map<SampleId, double> dijkstra_oracle(
    const std::map<SampleId, std::vector<std::pair<SampleId, Cost>>>& adj,
    const std::vector<SampleId>& sources) {
    std::map<SampleId, double> dist;
    using Entry = std::pair<double, SampleId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (const SampleId s : sources) {
        if (!adj.contains(s)) continue;
        dist[s] = 0.0;
        pq.emplace(0.0, s);
    }
    while (!pq.empty()) {
        const auto [d, id] = pq.top();
        pq.pop();
        const auto it = dist.find(id);
        if (it != dist.end() && d > it->second) continue;
        const auto ait = adj.find(id);
        if (ait == adj.end()) continue;
        for (const auto& [nbr, w] : ait->second) {
            const double cand = d + w.value();
            const auto dit = dist.find(nbr);
            if (dit == dist.end() || cand < dit->second) {
                dist[nbr] = cand;
                pq.emplace(cand, nbr);
            }
        }
    }
    return dist;
}

/// Adjacency of evaluated collision-free edges in a sample store.
inline std::map<SampleId, std::vector<std::pair<SampleId, Cost>>> evaluated_edge_graph(
    const SampleStore& store) {
    std::map<SampleId, std::vector<std::pair<SampleId, Cost>>> adj;
    for (const auto& [id, s] : store) {
        auto& lst = adj[id];
        for (const auto& [nbr, c] : s.valid_edges) lst.emplace_back(nbr, c);
    }
    return adj;
}

/// Minimal well-formedness check for the emitted XML: tag balance, attribute
/// quoting, single root.
inline bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    bool seen_root = false;
    const std::size_t n = text.size();
    while (i < n) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        if (text.compare(i, 4, "<!--") == 0) {
            const auto end = text.find("-->", i);
            if (end == std::string::npos) return false;
            i = end + 3;
            continue;
        }
        if (text.compare(i, 2, "<?") == 0) {
            const auto end = text.find("?>", i);
            if (end == std::string::npos) return false;
            i = end + 2;
            continue;
        }
        const auto close = text.find('>', i);
        if (close == std::string::npos) return false;
        std::string tag = text.substr(i + 1, close - i - 1);
        // Reject stray quotes inside the tag.
        if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
        const bool is_end = !tag.empty() && tag[0] == '/';
        const bool self_close = !tag.empty() && tag.back() == '/';
        std::string name = tag;
        if (is_end) name = name.substr(1);
        if (self_close) name.pop_back();
        name = name.substr(0, name.find_first_of(" \t\n"));
        if (name.empty()) return false;
        if (is_end) {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (!self_close) {
            if (stack.empty() && seen_root) return false;  // second root
            if (stack.empty()) seen_root = true;
            stack.push_back(name);
        } else if (stack.empty() && !seen_root) {
            seen_root = true;
        }
        i = close + 1;
    }
    return stack.empty() && seen_root;
}

}  // namespace relregion::testing
