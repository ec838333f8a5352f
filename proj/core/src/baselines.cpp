#include "relregion/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "relregion/search_graph.hpp"

namespace relregion {

void BaselineConfig::validate() const {
    if (steer_range < Cost::zero()) throw std::invalid_argument("baseline: eta must be >= 0");
    if (goal_bias < 0.0 || goal_bias > 1.0)
        throw std::invalid_argument("baseline: goal bias must lie in [0, 1]");
    if (rewire_scale <= 0.0) throw std::invalid_argument("baseline: rewire scale must be > 0");
    if (time_budget < 0.0) throw std::invalid_argument("baseline: time budget must be >= 0");
}

namespace {

enum class Variant { RrtStar, InformedRrtStar, RrtSharp };

class RrtEngine {
public:
    RrtEngine(const Scenario& sc, const BaselineConfig& cfg, Variant variant, PlannerHooks hooks)
        : scenario_(sc), cfg_(cfg), variant_(variant), hooks_(std::move(hooks)),
          store_(sc.space), rng_(cfg.seed) {
        cfg_.validate();
        scenario_.validate();
        if (cfg_.steer_range <= Cost::zero())
            cfg_.steer_range = Cost(0.15 * scenario_.space.diagonal());

        root_ = store_.add(scenario_.start);
        Sample& root = store_.at(root_);
        root.g = Cost::zero();
        root.in_forward = true;
        if (in_goal_region(scenario_.start)) {
            goal_vertices_.push_back(root_);
            update_incumbent();
        }
    }

    PlanResult run() {
        t0_ = std::chrono::steady_clock::now();
        std::uint64_t iterations = 0;
        while (!terminate(iterations)) {
            iterate();
            ++iterations;
            counters_.iterations = iterations;
        }
        return finalize();
    }

private:
    bool in_goal_region(const State& x) const {
        return distance(x, scenario_.goal_center, scenario_.space) <= scenario_.goal_radius;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

    bool terminate(std::uint64_t iterations) const {
        if (cfg_.target_cost && c_cur_ <= *cfg_.target_cost) return true;
        if (cfg_.max_iterations) return iterations >= *cfg_.max_iterations;
        return elapsed() >= cfg_.time_budget;
    }

    std::size_t neighborhood_size() const {
        const double d = scenario_.space.type == SpaceType::SE2 ? 3.0 : 6.0;
        const double n = static_cast<double>(store_.size());
        const double k =
            cfg_.rewire_scale * std::numbers::e * (1.0 + 1.0 / d) * std::log(std::max(2.0, n));
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k)));
    }

    State draw_state() {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        if (u01(rng_) < cfg_.goal_bias) {
            return scenario_.sample_goal(rng_);
        }
        if (variant_ == Variant::InformedRrtStar && c_cur_.is_finite()) {
            return sample_informed(scenario_.space, scenario_.start, scenario_.goal_center,
                                   c_cur_ + scenario_.goal_radius, rng_);
        }
        return sample_uniform(scenario_.space, rng_);
    }

    State steer(const State& from, const State& to) const {
        const Cost d = distance(from, to, scenario_.space);
        if (d <= cfg_.steer_range) return to;
        return interpolate(from, to, scenario_.space, cfg_.steer_range.value() / d.value());
    }

    Cost evaluate_edge(SampleId a, SampleId b) {
        if (store_.is_known_invalid(a, b)) return Cost::infinity();
        if (const auto cached = store_.known_valid_cost(a, b)) return *cached;
        ++counters_.edge_evaluations;
        const State& sa = store_.at(a).state;
        const State& sb = store_.at(b).state;
        if (scenario_.is_motion_valid(sa, sb)) {
            const Cost c = distance(sa, sb, scenario_.space);
            store_.add_valid_edge(a, b, c);
            return c;
        }
        store_.mark_invalid_edge(a, b);
        return Cost::infinity();
    }

    void propagate_subtree_costs(SampleId root) {
        std::vector<SampleId> stack{root};
        while (!stack.empty()) {
            const SampleId id = stack.back();
            stack.pop_back();
            Sample& s = store_.at(id);
            for (const SampleId child_id : s.children_fwd) {
                Sample& child = store_.at(child_id);
                child.g = s.g + distance(s.state, child.state, scenario_.space);
                ++child.version;
                stack.push_back(child_id);
            }
        }
    }

    void iterate() {
        const State x_rand = draw_state();
        const SampleId nearest_id = store_.index().nearest(x_rand);
        const State x_new = steer(store_.at(nearest_id).state, x_rand);
        ++counters_.state_checks;
        if (!scenario_.is_state_valid(x_new)) return;

        const std::size_t k = neighborhood_size();
        auto neighbors = store_.index().k_nearest_with_distances(x_new, k);

        const SampleId new_id = store_.add(x_new);
        Sample& node = store_.at(new_id);
        ++counters_.samples_drawn;
        if (hooks_.on_sample) hooks_.on_sample(x_new);

        if (variant_ == Variant::RrtSharp) {
            // Evaluate the whole neighborhood once; the valid edges feed the
            // global propagation graph.
            for (const auto& [nbr_id, d] : neighbors) evaluate_edge(nbr_id, new_id);
            SampleId best_parent = 0;
            Cost best_g = Cost::infinity();
            for (const auto& [nbr_id, cost] : node.valid_edges) {
                const Cost cand = store_.at(nbr_id).g + cost;
                if (cand < best_g) {
                    best_g = cand;
                    best_parent = nbr_id;
                }
            }
            if (!best_g.is_finite()) {
                store_.remove(new_id);
                return;
            }
            attach(best_parent, new_id, best_g);
            propagate_cost_updates(
                store_, {new_id},
                [this](const Sample& s) {
                    return s.g + distance(s.state, scenario_.goal_center, scenario_.space);
                });
        } else {
            // Lazy choose-parent: candidates in estimated-cost order, first
            // valid connection wins.
            std::vector<std::pair<Cost, SampleId>> candidates;
            candidates.reserve(neighbors.size());
            for (const auto& [nbr_id, d] : neighbors) {
                candidates.emplace_back(store_.at(nbr_id).g + d, nbr_id);
            }
            std::sort(candidates.begin(), candidates.end());
            SampleId parent = 0;
            Cost parent_g = Cost::infinity();
            for (const auto& [est, nbr_id] : candidates) {
                if (!est.is_finite()) break;
                const Cost c_edge = evaluate_edge(nbr_id, new_id);
                if (c_edge.is_finite()) {
                    parent = nbr_id;
                    parent_g = store_.at(nbr_id).g + c_edge;
                    break;
                }
            }
            if (!parent_g.is_finite()) {
                store_.remove(new_id);
                return;
            }
            attach(parent, new_id, parent_g);

            // Rewire the neighborhood through the new vertex.
            for (const auto& [nbr_id, d] : neighbors) {
                if (nbr_id == parent) continue;
                Sample& nbr = store_.at(nbr_id);
                if (!nbr.in_forward) continue;
                if (!(node.g + d < nbr.g)) continue;
                const Cost c_edge = evaluate_edge(new_id, nbr_id);
                if (!c_edge.is_finite() || !(node.g + c_edge < nbr.g)) continue;
                if (nbr.parent_fwd) {
                    Sample& old_parent = store_.at(*nbr.parent_fwd);
                    old_parent.children_fwd.erase(nbr_id);
                    old_parent.n_out = static_cast<std::uint32_t>(old_parent.children_fwd.size());
                }
                nbr.parent_fwd = new_id;
                node.children_fwd.insert(nbr_id);
                node.n_out = static_cast<std::uint32_t>(node.children_fwd.size());
                nbr.g = node.g + c_edge;
                ++nbr.version;
                propagate_subtree_costs(nbr_id);
            }
        }

        if (in_goal_region(x_new)) goal_vertices_.push_back(new_id);
        update_incumbent();
    }

    void attach(SampleId parent, SampleId child, Cost g) {
        Sample& p = store_.at(parent);
        Sample& c = store_.at(child);
        c.parent_fwd = parent;
        p.children_fwd.insert(child);
        p.n_out = static_cast<std::uint32_t>(p.children_fwd.size());
        c.g = g;
        c.in_forward = true;
        ++c.version;
    }

    void update_incumbent() {
        Cost best = Cost::infinity();
        for (const SampleId id : goal_vertices_) {
            const Sample& s = store_.at(id);
            if (s.in_forward && s.g < best) best = s.g;
        }
        if (best < c_cur_) {
            c_cur_ = best;
            const TraceEvent event{elapsed(), c_cur_, counters_.edge_evaluations};
            trace_.push_back(event);
            if (hooks_.on_improvement) hooks_.on_improvement(event);
        }
    }

    PlanResult finalize() {
        PlanResult result;
        result.best_cost = c_cur_;
        result.trace = trace_;
        result.counters = counters_;
        if (!c_cur_.is_finite()) {
            result.status = PlanStatus::Timeout;
            return result;
        }
        SampleId best_goal = 0;
        Cost best = Cost::infinity();
        for (const SampleId id : goal_vertices_) {
            const Sample& s = store_.at(id);
            if (s.in_forward && (s.g < best || (s.g == best && id < best_goal))) {
                best = s.g;
                best_goal = id;
            }
        }
        std::vector<State> path;
        SampleId cur = best_goal;
        for (std::size_t guard = 0; guard <= store_.size(); ++guard) {
            path.push_back(store_.at(cur).state);
            if (cur == root_) break;
            cur = *store_.at(cur).parent_fwd;
        }
        std::reverse(path.begin(), path.end());
        result.path = std::move(path);
        result.status = (cfg_.target_cost && c_cur_ <= *cfg_.target_cost)
                            ? PlanStatus::TargetReached
                            : PlanStatus::Solved;
        return result;
    }

    Scenario scenario_;
    BaselineConfig cfg_;
    Variant variant_;
    PlannerHooks hooks_;
    SampleStore store_;
    Rng rng_;
    Cost c_cur_ = Cost::infinity();
    SampleId root_ = 0;
    std::vector<SampleId> goal_vertices_;
    Counters counters_;
    std::vector<TraceEvent> trace_;
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace

PlanResult rrt_star_plan(const Scenario& sc, const BaselineConfig& cfg, PlannerHooks hooks) {
    return RrtEngine(sc, cfg, Variant::RrtStar, std::move(hooks)).run();
}

PlanResult informed_rrt_star_plan(const Scenario& sc, const BaselineConfig& cfg,
                                  PlannerHooks hooks) {
    return RrtEngine(sc, cfg, Variant::InformedRrtStar, std::move(hooks)).run();
}

PlanResult rrt_sharp_plan(const Scenario& sc, const BaselineConfig& cfg, PlannerHooks hooks) {
    return RrtEngine(sc, cfg, Variant::RrtSharp, std::move(hooks)).run();
}

}  // namespace relregion
