#include "relregion/planner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>

namespace relregion {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::e;
}  // namespace

const char* to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::Solved: return "solved";
        case PlanStatus::TargetReached: return "target_reached";
        case PlanStatus::Timeout: return "timeout";
        case PlanStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

void PlannerConfig::validate() const {
    if (batch_size < 2) throw std::invalid_argument("planner: batch_size must be >= 2");
    if (p_informed < 0.0 || p_informed > 1.0)
        throw std::invalid_argument("planner: p_informed must lie in [0, 1]");
    if (k_rgg <= 0.0) throw std::invalid_argument("planner: k_rgg must be positive");
    if (sigma_dir < 0.0) throw std::invalid_argument("planner: sigma_dir must be nonnegative");
    if (mag_clamp_lo < 0.0 || mag_clamp_hi < mag_clamp_lo)
        throw std::invalid_argument("planner: magnitude clamp requires 0 <= lo <= hi");
    if (max_sample_attempts < 1)
        throw std::invalid_argument("planner: max_sample_attempts must be >= 1");
    if (time_budget < 0.0) throw std::invalid_argument("planner: time_budget must be >= 0");
}

RelRegionPlanner::RelRegionPlanner(const Scenario& scenario, const PlannerConfig& cfg,
                                   PlannerHooks hooks)
    : scenario_(scenario), cfg_(cfg), hooks_(std::move(hooks)), store_(scenario.space),
      rng_(cfg.seed) {
    cfg_.validate();
    scenario_.validate();
    if (cfg_.gamma_max <= Cost::zero()) cfg_.gamma_max = Cost(0.1 * scenario_.space.diagonal());

    t0_ = std::chrono::steady_clock::now();

    start_id_ = store_.add(scenario_.start);
    Sample& start = store_.at(start_id_);
    start.g = Cost::zero();
    start.in_forward = true;

    goal_center_id_ = store_.add(scenario_.goal_center);
    Sample& goal = store_.at(goal_center_id_);
    goal.is_goal = true;
    goal.h_rev = Cost::zero();
    goal_ids_.push_back(goal_center_id_);

    if (distance(scenario_.start, scenario_.goal_center, scenario_.space) <=
        scenario_.goal_radius) {
        start.is_goal = true;
        goal_ids_.push_back(start_id_);
        update_incumbent();
    }
}

double RelRegionPlanner::elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
}

bool RelRegionPlanner::terminate_condition(std::uint64_t iterations_done) const {
    if (cfg_.target_cost && c_cur_ <= *cfg_.target_cost) return true;
    if (cfg_.max_iterations) return iterations_done >= *cfg_.max_iterations;
    return elapsed_seconds() >= cfg_.time_budget;
}

std::size_t RelRegionPlanner::rgg_degree(std::size_t n) const {
    const double d = scenario_.space.type == SpaceType::SE2 ? 3.0 : 6.0;
    if (n < 2) return 1;
    const double k = cfg_.k_rgg * kEuler * (1.0 + 1.0 / d) * std::log(static_cast<double>(n));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k)));
}

Cost RelRegionPlanner::provisional_h_rev(const State& x) const {
    if (store_.size() == 0) return Cost::infinity();
    const std::size_t k = std::min(rgg_degree(store_.size() + 1), store_.size());
    Cost best = Cost::infinity();
    for (const auto& [id, d] : store_.index().k_nearest_with_distances(x, k)) {
        const Sample& nbr = store_.at(id);
        if (!nbr.h_rev.is_finite()) continue;
        best = std::min(best, nbr.h_rev + d);
    }
    return best;
}

SampleId RelRegionPlanner::inject_goal_sample() {
    if (scenario_.goal_radius <= Cost::zero()) return goal_center_id_;
    for (int attempt = 0; attempt < cfg_.max_sample_attempts; ++attempt) {
        const State x = scenario_.sample_goal(rng_);
        ++counters_.state_checks;
        if (!scenario_.is_state_valid(x)) continue;
        const SampleId id = store_.add(x);
        Sample& s = store_.at(id);
        s.is_goal = true;
        s.h_rev = Cost::zero();
        ++counters_.samples_drawn;
        goal_ids_.push_back(id);
        return id;
    }
    return goal_center_id_;
}

std::vector<std::pair<double, SampleId>> RelRegionPlanner::weight_vertices() const {
    std::vector<std::pair<double, SampleId>> queue;
    for (const auto& [id, s] : store_) {
        if (!s.in_forward || !s.g.is_finite() || !s.h_rev.is_finite()) continue;
        const Cost f_hat = s.g + s.h_rev;
        if (!(f_hat < c_cur_)) continue;  // relevant vertices only
        const double normalized = c_cur_.is_finite() ? f_hat.value() / c_cur_.value() : 0.0;
        const double w = cfg_.lambda1 * s.n_selected + cfg_.lambda2 * s.n_out +
                         cfg_.lambda3 * normalized;
        queue.emplace_back(w, id);
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

std::optional<RelRegionPlanner::StepEstimate> RelRegionPlanner::estimate_step(
    const Sample& v) const {
    if (!v.g.is_finite() || !v.h_rev.is_finite()) return std::nullopt;
    const double gamma =
        std::min(c_cur_.value() - v.g.value() - v.h_rev.value(), cfg_.gamma_max.value());
    if (gamma <= 0.0) return std::nullopt;  // not promising
    if (!v.reverse_parent || !store_.contains(*v.reverse_parent)) return std::nullopt;
    Vec3 dir = store_.at(*v.reverse_parent).state.translation - v.state.translation;
    if (scenario_.space.type == SpaceType::SE2) dir.z = 0.0;
    const double len = dir.norm();
    if (len < 1e-12) return std::nullopt;  // pure-rotation reverse edge
    return StepEstimate{Cost(gamma), dir * (1.0 / len)};
}

State RelRegionPlanner::perturbed_expansion(const Sample& v, const StepEstimate& est) {
    std::normal_distribution<double> mag_noise(1.0, 0.25);
    const double scale =
        std::clamp(std::abs(mag_noise(rng_)), cfg_.mag_clamp_lo, cfg_.mag_clamp_hi);
    const double gamma_hat = est.gamma_rel.value() * scale;

    std::normal_distribution<double> dir_noise(0.0, cfg_.sigma_dir);
    Vec3 e = est.direction;
    State out = v.state;
    if (scenario_.space.type == SpaceType::SE2) {
        const double ang = dir_noise(rng_);
        if (ang != 0.0) {
            const double c = std::cos(ang), s = std::sin(ang);
            e = {c * e.x - s * e.y, s * e.x + c * e.y, 0.0};
        }
        out.translation = v.state.translation + e * (gamma_hat / scenario_.space.w_t);
        out.translation.z = 0.0;
        const double jitter = dir_noise(rng_);
        out.angle = wrap_angle(v.state.angle + jitter);
    } else {
        // Rotate about a uniformly random axis orthogonal to e.
        Vec3 ref{1, 0, 0};
        if (std::abs(e.x) > std::abs(e.y) && std::abs(e.x) > std::abs(e.z)) ref = {0, 1, 0};
        Vec3 u1 = e.cross(ref);
        u1 = u1 * (1.0 / u1.norm());
        const Vec3 u2 = e.cross(u1);
        std::uniform_real_distribution<double> uphi(0.0, 2.0 * kPi);
        const double phi = uphi(rng_);
        const Vec3 axis = u1 * std::cos(phi) + u2 * std::sin(phi);
        const double ang = dir_noise(rng_);
        if (ang != 0.0) e = Quat::from_axis_angle(axis, ang).rotate(e);
        out.translation = v.state.translation + e * (gamma_hat / scenario_.space.w_t);
        std::normal_distribution<double> n01(0.0, 1.0);
        Vec3 jaxis{n01(rng_), n01(rng_), n01(rng_)};
        const double jnorm = jaxis.norm();
        const double jang = dir_noise(rng_);
        if (jang != 0.0 && jnorm > 1e-12) {
            out.rotation =
                (v.state.rotation * Quat::from_axis_angle(jaxis * (1.0 / jnorm), jang))
                    .normalized();
        }
    }
    return out;
}

std::vector<State> RelRegionPlanner::sample_relevant(std::size_t quota) {
    std::vector<State> out;
    if (quota == 0) return out;
    const auto queue = weight_vertices();
    if (queue.empty()) return out;
    const std::size_t expand_times = std::max<std::size_t>(1, quota / queue.size());

    for (const auto& [w, id] : queue) {
        if (out.size() >= quota) break;
        Sample& v = store_.at(id);
        const auto est = estimate_step(v);
        if (!est) continue;
        const std::size_t slots = std::min(expand_times, quota - out.size());
        for (std::size_t slot = 0; slot < slots; ++slot) {
            ++v.n_selected;
            for (int attempt = 0; attempt < cfg_.max_sample_attempts; ++attempt) {
                const State x = perturbed_expansion(v, *est);
                ++counters_.state_checks;
                if (scenario_.is_state_valid(x)) {
                    out.push_back(x);
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<SampleId> RelRegionPlanner::sample_batch() {
    const auto m = static_cast<std::size_t>(cfg_.batch_size);
    const auto quota =
        static_cast<std::size_t>(std::floor((1.0 - cfg_.p_informed) * static_cast<double>(m)));

    std::vector<State> fresh = sample_relevant(quota);

    // Fill the remainder from the informed set (uniform before a solution
    // exists). The spheroid is inflated by the goal radius so no state that
    // could improve a path into the goal region is excluded.
    const Cost c_sample = c_cur_.is_finite() ? c_cur_ + scenario_.goal_radius : Cost::infinity();
    while (fresh.size() < m) {
        bool accepted = false;
        for (int attempt = 0; attempt < cfg_.max_sample_attempts; ++attempt) {
            const State x = sample_informed(scenario_.space, scenario_.start,
                                            scenario_.goal_center, c_sample, rng_);
            ++counters_.state_checks;
            if (scenario_.is_state_valid(x)) {
                fresh.push_back(x);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // short batch after attempt exhaustion
    }

    std::vector<SampleId> ids;
    ids.reserve(fresh.size());
    for (const State& x : fresh) {
        const Cost h0 = provisional_h_rev(x);
        const SampleId id = store_.add(x);
        store_.at(id).h_rev = h0;
        ++counters_.samples_drawn;
        if (hooks_.on_sample) hooks_.on_sample(x);
        ids.push_back(id);
    }
    return ids;
}

void RelRegionPlanner::rebuild_rgg() {
    rgg_.clear();
    const std::size_t n = store_.size();
    for (const auto& [id, s] : store_) rgg_[id];
    if (n < 2) return;

    const std::size_t k = std::min(rgg_degree(n), n - 1);
    std::map<std::pair<SampleId, SampleId>, Cost> edges;
    for (const auto& [id, s] : store_) {
        std::size_t found = 0;
        for (const auto& [nid, d] : store_.index().k_nearest_with_distances(s.state, k + 1)) {
            if (nid == id) continue;
            edges.emplace(std::minmax(id, nid), d);
            if (++found == k) break;
        }
    }
    for (const auto& [edge, d] : edges) {
        rgg_[edge.first].emplace_back(edge.second, d);
        rgg_[edge.second].emplace_back(edge.first, d);
    }
    for (auto& [id, nbrs] : rgg_) {
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
}

void RelRegionPlanner::build_reverse_tree() {
    // The previous reverse tree is discarded wholesale and rebuilt from the
    // goal labels by Dijkstra over the unvalidated RGG.
    for (auto& [id, s] : store_) {
        s.h_rev = Cost::infinity();
        s.in_reverse = false;
        s.reverse_parent.reset();
        ++s.version;
    }

    using Entry = std::pair<Cost, SampleId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (const SampleId id : goal_ids_) {
        if (!store_.contains(id)) continue;
        Sample& s = store_.at(id);
        s.h_rev = Cost::zero();
        s.in_reverse = true;
        pq.emplace(Cost::zero(), id);
    }

    while (!pq.empty()) {
        const auto [d, id] = pq.top();
        pq.pop();
        const Sample& v = store_.at(id);
        if (d > v.h_rev) continue;
        const auto it = rgg_.find(id);
        if (it == rgg_.end()) continue;
        for (const auto& [nid, w] : it->second) {
            Sample& nbr = store_.at(nid);
            const Cost cand = d + w;
            if (cand < nbr.h_rev) {
                nbr.h_rev = cand;
                nbr.reverse_parent = id;
                nbr.in_reverse = true;
                ++nbr.version;
                pq.emplace(cand, nid);
            }
        }
    }
}

Cost RelRegionPlanner::evaluate_edge(SampleId a, SampleId b) {
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

void RelRegionPlanner::push_vertex(SampleId id) {
    const Sample& s = store_.at(id);
    qv_.push_back(VertexEntry{s.g + s.h_rev, id, s.version});
    std::push_heap(qv_.begin(), qv_.end(),
                   [](const VertexEntry& a, const VertexEntry& b) { return a > b; });
}

void RelRegionPlanner::extend(SampleId parent, SampleId child, Cost edge_cost) {
    Sample& p = store_.at(parent);
    Sample& c = store_.at(child);
    if (c.parent_fwd) {
        Sample& old_parent = store_.at(*c.parent_fwd);
        old_parent.children_fwd.erase(child);
        old_parent.n_out = static_cast<std::uint32_t>(old_parent.children_fwd.size());
    }
    c.parent_fwd = parent;
    p.children_fwd.insert(child);
    p.n_out = static_cast<std::uint32_t>(p.children_fwd.size());
    c.g = p.g + edge_cost;
    c.in_forward = true;
    ++c.version;
    push_vertex(child);
}

void RelRegionPlanner::replan_from(SampleId improved) {
    propagate_cost_updates(
        store_, {improved}, [](const Sample& s) { return s.g + s.h_rev; },
        [this](SampleId id) { push_vertex(id); });
}

void RelRegionPlanner::record_improvement() {
    const TraceEvent event{elapsed_seconds(), c_cur_, counters_.edge_evaluations};
    trace_.push_back(event);
    if (hooks_.on_improvement) hooks_.on_improvement(event);
}

void RelRegionPlanner::update_incumbent() {
    Cost best = Cost::infinity();
    for (const SampleId id : goal_ids_) {
        if (!store_.contains(id)) continue;
        const Sample& s = store_.at(id);
        if (s.in_forward && s.g < best) best = s.g;
    }
    if (best < c_cur_) {
        c_cur_ = best;
        record_improvement();
    }
}

void RelRegionPlanner::build_forward_tree() {
    qv_.clear();
    for (const auto& [id, s] : store_) {
        if (s.in_forward) push_vertex(id);
    }

    struct EdgeEntry {
        Cost key;
        SampleId v;
        SampleId x;
        Cost d;
        std::uint32_t vstamp;
        bool operator>(const EdgeEntry& o) const {
            if (key != o.key) return key > o.key;
            if (v != o.v) return v > o.v;
            return x > o.x;
        }
    };
    const auto v_cmp = [](const VertexEntry& a, const VertexEntry& b) { return a > b; };
    const auto e_cmp = [](const EdgeEntry& a, const EdgeEntry& b) { return a > b; };
    std::vector<EdgeEntry> qe;

    for (;;) {
        // Drain vertices while the best vertex key can still produce an edge
        // at least as good as the best queued edge.
        while (!qv_.empty()) {
            const Cost best_edge = qe.empty() ? Cost::infinity() : qe.front().key;
            if (!(qv_.front().key <= best_edge)) break;
            std::pop_heap(qv_.begin(), qv_.end(), v_cmp);
            const VertexEntry ve = qv_.back();
            qv_.pop_back();
            if (!store_.contains(ve.id)) continue;
            const Sample& v = store_.at(ve.id);
            if (ve.stamp != v.version) continue;  // superseded by a re-push
            const auto it = rgg_.find(ve.id);
            if (it == rgg_.end()) continue;
            for (const auto& [nid, d] : it->second) {
                const Sample& x = store_.at(nid);
                const Cost est = v.g + d + x.h_rev;
                if (est < c_cur_) {
                    qe.push_back(EdgeEntry{est, ve.id, nid, d, v.version});
                    std::push_heap(qe.begin(), qe.end(), e_cmp);
                }
            }
        }
        if (qe.empty()) break;

        std::pop_heap(qe.begin(), qe.end(), e_cmp);
        const EdgeEntry edge = qe.back();
        qe.pop_back();
        if (!store_.contains(edge.v) || !store_.contains(edge.x)) continue;
        Sample& v = store_.at(edge.v);
        if (edge.vstamp != v.version) continue;  // superseded by a re-expansion
        Sample& x = store_.at(edge.x);

        // Postponement cascade: estimate gates first, the true edge cost only
        // when both pass, then the gates again with the evaluated cost.
        if (v.g + edge.d + x.h_rev < c_cur_) {
            if (v.g + edge.d < x.g) {
                const Cost c_edge = evaluate_edge(edge.v, edge.x);
                if (v.g + c_edge + x.h_rev < c_cur_) {
                    if (v.g + c_edge < x.g) {
                        extend(edge.v, edge.x, c_edge);
                        replan_from(edge.x);
                        update_incumbent();
                    }
                }
            }
        } else {
            // The best remaining edge cannot beat the incumbent; nothing
            // behind it can either.
            qv_.clear();
            qe.clear();
            break;
        }
    }

    if (hooks_.after_forward_tree) hooks_.after_forward_tree(*this);
}

std::vector<SampleId> RelRegionPlanner::best_path_ids() const {
    SampleId best_goal = 0;
    Cost best = Cost::infinity();
    bool found = false;
    for (const SampleId id : goal_ids_) {
        if (!store_.contains(id)) continue;
        const Sample& s = store_.at(id);
        if (!s.in_forward || !s.g.is_finite()) continue;
        if (!found || s.g < best || (s.g == best && id < best_goal)) {
            best = s.g;
            best_goal = id;
            found = true;
        }
    }
    if (!found) return {};

    std::vector<SampleId> path;
    SampleId cur = best_goal;
    for (std::size_t guard = 0; guard <= store_.size(); ++guard) {
        path.push_back(cur);
        if (cur == start_id_) {
            std::reverse(path.begin(), path.end());
            return path;
        }
        const Sample& s = store_.at(cur);
        if (!s.parent_fwd) break;
        cur = *s.parent_fwd;
    }
    return {};  // broken chain; callers treat as no path
}

std::size_t RelRegionPlanner::prune() {
    std::set<SampleId> protected_ids = {start_id_, goal_center_id_};
    for (const SampleId id : best_path_ids()) protected_ids.insert(id);

    const auto goal_lower_bound = [&](const Sample& s) {
        const double d = distance(s.state, scenario_.goal_center, scenario_.space).value() -
                         scenario_.goal_radius.value();
        return std::max(0.0, d);
    };

    // Region-failing or reverse-disconnected tree vertices are removed with
    // their entire subtrees; samples outside the forward tree are dropped
    // outright (they get resampled if the region stays promising).
    std::vector<SampleId> subtree_roots;
    std::set<SampleId> removal;
    std::map<SampleId, bool> region_failed;
    for (const auto& [id, s] : store_) {
        if (protected_ids.contains(id)) continue;
        if (!s.in_forward) {
            removal.insert(id);
            region_failed[id] = false;
        } else if (!s.in_reverse) {
            subtree_roots.push_back(id);
            region_failed[id] = false;
        } else if (s.g.value() + goal_lower_bound(s) > c_cur_.value()) {
            subtree_roots.push_back(id);
            region_failed[id] = true;
        }
    }

    std::vector<SampleId> detached;
    for (const SampleId root : subtree_roots) {
        if (removal.contains(root)) continue;
        std::vector<SampleId> stack{root};
        while (!stack.empty()) {
            const SampleId id = stack.back();
            stack.pop_back();
            if (removal.contains(id)) continue;
            if (protected_ids.contains(id)) {
                // A protected vertex inside a doomed subtree is detached (with
                // its descendants) instead of deleted.
                std::vector<SampleId> sub{id};
                while (!sub.empty()) {
                    const SampleId d = sub.back();
                    sub.pop_back();
                    for (const SampleId c : store_.at(d).children_fwd) sub.push_back(c);
                    detached.push_back(d);
                }
                continue;
            }
            removal.insert(id);
            region_failed.try_emplace(id, region_failed[root]);
            for (const SampleId c : store_.at(id).children_fwd) stack.push_back(c);
        }
    }
    for (const SampleId id : detached) {
        if (!removal.contains(id)) store_.detach_from_forward_tree(id);
    }

    for (const SampleId id : removal) {
        if (hooks_.on_prune) {
            hooks_.on_prune(PruneEvent{store_.at(id).state, region_failed[id], c_cur_});
        }
        store_.remove(id);
    }
    std::erase_if(goal_ids_, [&](SampleId id) { return removal.contains(id); });
    return removal.size();
}

PlanResult RelRegionPlanner::plan() {
    t0_ = std::chrono::steady_clock::now();

    std::uint64_t iterations = 0;
    while (!terminate_condition(iterations)) {
        if (iterations > 0) prune();
        inject_goal_sample();
        sample_batch();
        rebuild_rgg();
        build_reverse_tree();
        build_forward_tree();
        ++iterations;
        counters_.iterations = iterations;
    }

    PlanResult result;
    result.best_cost = c_cur_;
    result.trace = trace_;
    result.counters = counters_;
    const std::vector<SampleId> ids = best_path_ids();
    if (c_cur_.is_finite() && !ids.empty()) {
        for (const SampleId id : ids) result.path.push_back(store_.at(id).state);
        result.status = (cfg_.target_cost && c_cur_ <= *cfg_.target_cost)
                            ? PlanStatus::TargetReached
                            : PlanStatus::Solved;
    } else {
        result.best_cost = Cost::infinity();
        result.status = PlanStatus::Timeout;
    }
    return result;
}

}  // namespace relregion
