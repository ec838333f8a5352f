#include "relregion/gnat.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace relregion {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct MinMax {
    double lo = kInf;
    double hi = -kInf;
    void extend(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};
}  // namespace

struct GnatIndex::Node {
    bool is_leaf = true;
    std::vector<Item*> bucket;  // leaf contents
    // Internal-node fields. Pivot items live at the node itself; range_[i][j]
    // bounds d(pivot_i, e) over every element stored under child j.
    std::vector<Item*> pivots;
    std::vector<std::unique_ptr<Node>> children;
    std::vector<std::vector<MinMax>> range_;
};

GnatIndex::GnatIndex(SpaceDef space) : GnatIndex(std::move(space), Config{}) {}

GnatIndex::GnatIndex(GnatIndex&&) noexcept = default;
GnatIndex& GnatIndex::operator=(GnatIndex&&) noexcept = default;
GnatIndex::~GnatIndex() = default;

GnatIndex::GnatIndex(SpaceDef space, Config cfg)
    : space_(std::move(space)), cfg_(cfg), root_(std::make_unique<Node>()) {
    if (cfg_.leaf_capacity < 2) cfg_.leaf_capacity = 2;
    if (cfg_.pivots < 2) cfg_.pivots = 2;
}

double GnatIndex::dist(const State& a, const State& b) const {
    ++evals_;
    return distance(a, b, space_).value();
}

void GnatIndex::insert(std::uint64_t id, const State& x) {
    if (live_.contains(id)) throw DuplicateId(id);
    items_.push_back(Item{id, x, false});
    Item* item = &items_.back();
    live_.emplace(id, item);
    insert_into(*root_, item);
}

void GnatIndex::insert_into(Node& node, Item* item) {
    Node* cur = &node;
    while (!cur->is_leaf) {
        const std::size_t m = cur->pivots.size();
        std::vector<double> d(m);
        std::size_t best = 0;
        for (std::size_t i = 0; i < m; ++i) {
            d[i] = dist(cur->pivots[i]->state, item->state);
            if (d[i] < d[best]) best = i;
        }
        // Extend every pivot's bound for the chosen child so the tables stay
        // sound for the subtree the item lands in.
        for (std::size_t i = 0; i < m; ++i) cur->range_[i][best].extend(d[i]);
        cur = cur->children[best].get();
    }
    cur->bucket.push_back(item);
    if (cur->bucket.size() > cfg_.leaf_capacity) split_leaf(*cur);
}

void GnatIndex::split_leaf(Node& node) {
    std::vector<Item*> items = std::move(node.bucket);
    node.bucket.clear();

    // Greedy max-min pivot selection, seeded with the smallest id for
    // determinism.
    const std::size_t k = std::min(cfg_.pivots, items.size());
    std::vector<Item*> pivots;
    std::size_t seed = 0;
    for (std::size_t i = 1; i < items.size(); ++i)
        if (items[i]->id < items[seed]->id) seed = i;
    std::vector<char> taken(items.size(), 0);
    pivots.push_back(items[seed]);
    taken[seed] = 1;
    std::vector<double> min_d(items.size(), kInf);
    while (pivots.size() < k) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (taken[i]) continue;
            min_d[i] = std::min(min_d[i], dist(pivots.back()->state, items[i]->state));
        }
        std::size_t best = items.size();
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (taken[i]) continue;
            if (best == items.size() || min_d[i] > min_d[best] ||
                (min_d[i] == min_d[best] && items[i]->id < items[best]->id)) {
                best = i;
            }
        }
        pivots.push_back(items[best]);
        taken[best] = 1;
    }

    node.is_leaf = false;
    node.pivots = pivots;
    node.children.clear();
    for (std::size_t i = 0; i < pivots.size(); ++i) node.children.push_back(std::make_unique<Node>());
    node.range_.assign(pivots.size(), std::vector<MinMax>(pivots.size()));

    for (std::size_t i = 0; i < items.size(); ++i) {
        if (taken[i]) continue;
        std::vector<double> d(pivots.size());
        std::size_t best = 0;
        for (std::size_t p = 0; p < pivots.size(); ++p) {
            d[p] = dist(pivots[p]->state, items[i]->state);
            if (d[p] < d[best]) best = p;
        }
        for (std::size_t p = 0; p < pivots.size(); ++p) node.range_[p][best].extend(d[p]);
        node.children[best]->bucket.push_back(items[i]);
    }
    for (auto& child : node.children) {
        if (child->bucket.size() > cfg_.leaf_capacity) split_leaf(*child);
    }
}

void GnatIndex::remove(std::uint64_t id) {
    auto it = live_.find(id);
    if (it == live_.end()) throw UnknownId(id);
    it->second->removed = true;
    live_.erase(it);
    ++dead_;
    if (dead_ > live_.size()) rebuild();
}

void GnatIndex::rebuild() {
    std::vector<std::pair<std::uint64_t, State>> survivors;
    survivors.reserve(live_.size());
    for (const auto& [id, item] : live_) survivors.emplace_back(id, item->state);
    std::sort(survivors.begin(), survivors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    root_ = std::make_unique<Node>();
    items_.clear();
    live_.clear();
    dead_ = 0;
    for (const auto& [id, state] : survivors) insert(id, state);
}

namespace {

// Result collector: max-heap of (distance, id) capped at k, lexicographic
// order so ties at the kth boundary resolve to the smaller id.
struct KnnHeap {
    std::size_t cap;
    std::vector<std::pair<double, std::uint64_t>> heap;

    explicit KnnHeap(std::size_t k) : cap(k) {}

    double bound() const { return heap.size() < cap ? kInf : heap.front().first; }

    void offer(double d, std::uint64_t id) {
        const std::pair<double, std::uint64_t> c{d, id};
        if (heap.size() < cap) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end());
        } else if (c < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end());
        }
    }

    std::vector<std::pair<double, std::uint64_t>> sorted() {
        std::sort(heap.begin(), heap.end());
        return heap;
    }
};

}  // namespace

std::vector<std::pair<std::uint64_t, Cost>> GnatIndex::k_nearest_with_distances(
    const State& q, std::size_t k) const {
    if (live_.empty()) throw EmptyIndex();
    if (k == 0) return {};
    KnnHeap out(k);

    // Recursive traversal with range-table pruning. A child is skipped only
    // when its distance lower bound strictly exceeds the current kth bound, so
    // boundary ties stay reachable and results match a linear scan exactly.
    const auto visit = [&](const Node& node, const auto& self) -> void {
        if (node.is_leaf) {
            for (const Item* item : node.bucket) {
                const double d = dist(item->state, q);
                if (!item->removed) out.offer(d, item->id);
            }
            return;
        }
        const std::size_t m = node.pivots.size();
        std::vector<double> dp(m);
        for (std::size_t i = 0; i < m; ++i) {
            dp[i] = dist(node.pivots[i]->state, q);
            if (!node.pivots[i]->removed) out.offer(dp[i], node.pivots[i]->id);
        }
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dp[a] != dp[b]) return dp[a] < dp[b];
            return a < b;
        });
        for (const std::size_t j : order) {
            const Node* child = node.children[j].get();
            double lb = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const MinMax& r = node.range_[i][j];
                if (r.lo > r.hi) {
                    lb = kInf;  // empty child
                    break;
                }
                lb = std::max({lb, dp[i] - r.hi, r.lo - dp[i]});
            }
            if (lb > out.bound()) continue;
            self(*child, self);
        }
    };
    visit(*root_, visit);

    std::vector<std::pair<std::uint64_t, Cost>> result;
    for (const auto& [d, id] : out.sorted()) result.emplace_back(id, Cost(d));
    return result;
}

std::vector<std::uint64_t> GnatIndex::k_nearest(const State& q, std::size_t k) const {
    std::vector<std::uint64_t> ids;
    for (const auto& [id, d] : k_nearest_with_distances(q, k)) ids.push_back(id);
    return ids;
}

std::uint64_t GnatIndex::nearest(const State& q) const {
    return k_nearest_with_distances(q, 1).front().first;
}

std::vector<std::uint64_t> GnatIndex::range(const State& q, Cost r) const {
    std::vector<std::uint64_t> out;
    const double radius = r.value();

    const auto visit = [&](const Node& node, const auto& self) -> void {
        if (node.is_leaf) {
            for (const Item* item : node.bucket) {
                if (!item->removed && dist(item->state, q) <= radius) out.push_back(item->id);
            }
            return;
        }
        const std::size_t m = node.pivots.size();
        std::vector<double> dp(m);
        for (std::size_t i = 0; i < m; ++i) {
            dp[i] = dist(node.pivots[i]->state, q);
            if (!node.pivots[i]->removed && dp[i] <= radius) out.push_back(node.pivots[i]->id);
        }
        for (std::size_t j = 0; j < node.children.size(); ++j) {
            double lb = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const MinMax& rr = node.range_[i][j];
                if (rr.lo > rr.hi) {
                    lb = kInf;
                    break;
                }
                lb = std::max({lb, dp[i] - rr.hi, rr.lo - dp[i]});
            }
            if (lb > radius) continue;
            self(*node.children[j], self);
        }
    };
    visit(*root_, visit);
    std::sort(out.begin(), out.end());
    return out;
}

void GnatIndex::validate() const {
    const auto check = [&](const Node& node, const auto& self) -> void {
        if (node.is_leaf) return;
        for (std::size_t j = 0; j < node.children.size(); ++j) {
            std::vector<const Item*> sub;
            const auto sub_collect = [&](const Node& n, const auto& s) -> void {
                if (n.is_leaf) {
                    sub.insert(sub.end(), n.bucket.begin(), n.bucket.end());
                    return;
                }
                sub.insert(sub.end(), n.pivots.begin(), n.pivots.end());
                for (const auto& c : n.children) s(*c, s);
            };
            sub_collect(*node.children[j], sub_collect);
            for (std::size_t i = 0; i < node.pivots.size(); ++i) {
                const MinMax& r = node.range_[i][j];
                for (const Item* item : sub) {
                    const double d = distance(node.pivots[i]->state, item->state, space_).value();
                    if (d < r.lo - 1e-12 || d > r.hi + 1e-12) {
                        throw std::logic_error("gnat: unsound range table");
                    }
                }
            }
        }
        for (const auto& c : node.children) self(*c, self);
    };
    check(*root_, check);
}

}  // namespace relregion
