#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relregion/cost.hpp"
#include "relregion/state_space.hpp"

namespace relregion {

struct DuplicateId : std::runtime_error {
    explicit DuplicateId(std::uint64_t id)
        : std::runtime_error("gnat: duplicate id " + std::to_string(id)) {}
};
struct UnknownId : std::runtime_error {
    explicit UnknownId(std::uint64_t id)
        : std::runtime_error("gnat: unknown id " + std::to_string(id)) {}
};
struct EmptyIndex : std::runtime_error {
    EmptyIndex() : std::runtime_error("gnat: query on empty index") {}
};

/// Geometric Near-neighbor Access Tree over the state-space metric.
///
/// Exact nearest / k-nearest / range queries with Brin-style pruning via
/// per-pivot range tables. Removal is lazy: items are tombstoned and the tree
/// is rebuilt from live items once more than half of it is dead. All ties are
/// broken by smaller id so query results are deterministic.
class GnatIndex {
public:
    struct Config {
        std::size_t leaf_capacity = 50;  // L
        std::size_t pivots = 8;          // fan-out per split
    };

    explicit GnatIndex(SpaceDef space);
    GnatIndex(SpaceDef space, Config cfg);
    GnatIndex(GnatIndex&&) noexcept;
    GnatIndex& operator=(GnatIndex&&) noexcept;
    ~GnatIndex();

    void insert(std::uint64_t id, const State& x);
    void remove(std::uint64_t id);

    [[nodiscard]] std::uint64_t nearest(const State& q) const;
    [[nodiscard]] std::vector<std::uint64_t> k_nearest(const State& q, std::size_t k) const;
    [[nodiscard]] std::vector<std::pair<std::uint64_t, Cost>> k_nearest_with_distances(
        const State& q, std::size_t k) const;
    /// All live ids within metric distance r (inclusive), sorted by id.
    [[nodiscard]] std::vector<std::uint64_t> range(const State& q, Cost r) const;

    [[nodiscard]] std::size_t size() const { return live_.size(); }
    [[nodiscard]] const SpaceDef& space() const { return space_; }

    /// Total metric evaluations performed (build + queries); test hook.
    [[nodiscard]] std::uint64_t distance_evaluations() const { return evals_; }

    /// Walks the tree and throws std::logic_error if any range table is
    /// unsound; test hook.
    void validate() const;

private:
    struct Item {
        std::uint64_t id;
        State state;
        bool removed = false;
    };
    struct Node;

    double dist(const State& a, const State& b) const;
    void insert_into(Node& node, Item* item);
    void split_leaf(Node& node);
    void rebuild();

    SpaceDef space_;
    Config cfg_;
    std::unique_ptr<Node> root_;
    std::deque<Item> items_;
    std::unordered_map<std::uint64_t, Item*> live_;
    std::size_t dead_ = 0;
    mutable std::uint64_t evals_ = 0;
};

}  // namespace relregion
