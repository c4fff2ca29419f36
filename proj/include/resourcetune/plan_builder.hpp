#ifndef RESOURCETUNE_PLAN_BUILDER_HPP
#define RESOURCETUNE_PLAN_BUILDER_HPP

#include <algorithm>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "resourcetune/model.hpp"

namespace rtune {

namespace detail {

inline bool sorted_intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

inline void sorted_merge_into(std::vector<int>& dst, const std::vector<int>& src) {
    std::vector<int> merged;
    merged.reserve(dst.size() + src.size());
    std::merge(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    dst = std::move(merged);
}

}  // namespace detail

/// A tuning plan under construction, with the bookkeeping the position
/// filters need: per-step observed task sets (for the no-overlap rule) and
/// per-step free receiver counts (for the no-fragmentation rule).
class PlanBuilder {
public:
    explicit PlanBuilder(const SystemSpec& spec)
        : plan_(spec),
          step_tracks_(spec.steps_per_plan),
          step_subsurveys_(spec.steps_per_plan),
          free_(spec.steps_per_plan, std::vector<int>(spec.node_count, spec.receivers_per_node)) {}

    const TuningPlan& plan() const { return plan_; }

    int step_min_free(int step) const {
        return *std::min_element(free_[step].begin(), free_[step].end());
    }

    int step_empty_cells(int step) const {
        int total = 0;
        for (int f : free_[step]) total += f;
        return total;
    }

    bool overlaps_step(const Configuration& c, int step) const {
        return detail::sorted_intersect(c.observed_tracks, step_tracks_[step]) ||
               detail::sorted_intersect(c.observed_subsurveys, step_subsurveys_[step]);
    }

    /// All positions for the configuration that keep cells empty and satisfy
    /// no-overlap, and no-fragmentation when enforced. Positions come out in
    /// canonical order: step ascending, then cell assignment ascending.
    std::vector<Position> feasible_positions(const Configuration& c,
                                             bool enforce_no_fragmentation) const {
        std::vector<Position> positions;
        const int steps = plan_.steps_per_plan();
        const int nodes = plan_.node_count();
        const int receivers = plan_.receivers_per_node();
        for (int t = 0; t < steps; ++t) {
            if (overlaps_step(c, t)) continue;
            if (c.weight == 1) {
                const int old_min = step_min_free(t);
                for (int n = 0; n < nodes; ++n) {
                    // Taking a receiver on node n lowers the step minimum
                    // exactly when node n attains it.
                    if (enforce_no_fragmentation && free_[t][n] <= old_min) continue;
                    if (free_[t][n] == 0) continue;
                    for (int r = 0; r < receivers; ++r) {
                        if (!plan_.occupied(n, r, t)) {
                            positions.push_back(Position{t, {{n, r}}});
                        }
                    }
                }
            } else {
                bool all_nodes_free = true;
                for (int n = 0; n < nodes; ++n) all_nodes_free &= free_[t][n] > 0;
                if (!all_nodes_free) continue;
                // A weight-4 insertion lowers every node's free count by one,
                // so the step minimum always drops.
                if (enforce_no_fragmentation) continue;
                std::vector<std::vector<int>> options(nodes);
                for (int n = 0; n < nodes; ++n) {
                    for (int r = 0; r < receivers; ++r) {
                        if (!plan_.occupied(n, r, t)) options[n].push_back(r);
                    }
                }
                std::vector<std::size_t> pick(nodes, 0);
                while (true) {
                    Position q{t, {}};
                    q.cells.reserve(nodes);
                    for (int n = 0; n < nodes; ++n) q.cells.emplace_back(n, options[n][pick[n]]);
                    positions.push_back(std::move(q));
                    int n = nodes - 1;
                    while (n >= 0 && ++pick[n] == options[n].size()) pick[n--] = 0;
                    if (n < 0) break;
                }
            }
        }
        return positions;
    }

    void insert(const Configuration& c, int config_id, const Position& q) {
        rtune::insert(plan_, c, q, config_id);
        for (const auto& [node, receiver] : q.cells) free_[q.step][node] -= 1;
        detail::sorted_merge_into(step_tracks_[q.step], c.observed_tracks);
        detail::sorted_merge_into(step_subsurveys_[q.step], c.observed_subsurveys);
    }

private:
    TuningPlan plan_;
    std::vector<std::vector<int>> step_tracks_;
    std::vector<std::vector<int>> step_subsurveys_;
    std::vector<std::vector<int>> free_;  // [step][node] free receiver cells
};

/// Deterministic choice among feasible positions: the most loaded step
/// (fewest empty cells) first, then the lowest step index, then the lowest
/// cell assignment.
inline Position select_position(std::span<const Position> positions, const TuningPlan& plan) {
    if (positions.empty()) throw std::invalid_argument("select_position: no positions");
    std::vector<int> empty_cells(plan.steps_per_plan(), 0);
    for (int t = 0; t < plan.steps_per_plan(); ++t) {
        for (int n = 0; n < plan.node_count(); ++n) {
            for (int r = 0; r < plan.receivers_per_node(); ++r) {
                empty_cells[t] += plan.occupied(n, r, t) ? 0 : 1;
            }
        }
    }
    const Position* best = &positions[0];
    for (const Position& q : positions) {
        const auto key = std::make_pair(empty_cells[q.step], q.step);
        const auto best_key = std::make_pair(empty_cells[best->step], best->step);
        if (key < best_key || (key == best_key && q.cells < best->cells)) best = &q;
    }
    return *best;
}

/// Builds one tuning plan from configurations and their goal insertion
/// rates. Configurations with positive rates queue in increasing
/// lexicographic order of (inserted proportion, -weight, -rate); each pop
/// first tries positions passing no-overlap + no-fragmentation, then
/// no-overlap alone, and is dropped for good when both fail. A configuration
/// returns to the queue only while its rate exceeds its inserted proportion.
inline TuningPlan construct_plan(std::span<const Configuration> configs,
                                 std::span<const double> rates, const SystemSpec& spec) {
    if (configs.size() != rates.size()) {
        throw std::invalid_argument("construct_plan: config/rate size mismatch");
    }
    struct Entry {
        int inserted_steps;
        int weight;
        double rate;
        int order;
        int config;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.inserted_steps != b.inserted_steps) return a.inserted_steps > b.inserted_steps;
            if (a.weight != b.weight) return a.weight < b.weight;
            if (a.rate != b.rate) return a.rate < b.rate;
            return a.order > b.order;
        }
    };

    PlanBuilder builder(spec);
    std::priority_queue<Entry, std::vector<Entry>, Later> queue;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (rates[i] > 0.0) {
            queue.push(Entry{0, configs[i].weight, rates[i], int(i), int(i)});
        }
    }

    const double steps = double(spec.steps_per_plan);
    while (!queue.empty()) {
        Entry entry = queue.top();
        queue.pop();
        const Configuration& c = configs[entry.config];

        std::vector<Position> positions = builder.feasible_positions(c, true);
        if (positions.empty()) positions = builder.feasible_positions(c, false);
        if (positions.empty()) continue;  // not returned to the queue

        const Position q = select_position(positions, builder.plan());
        builder.insert(c, entry.config, q);
        entry.inserted_steps += 1;
        if (entry.rate > double(entry.inserted_steps) / steps) {
            queue.push(entry);
        }
    }
    return builder.plan();
}

}  // namespace rtune

#endif  // RESOURCETUNE_PLAN_BUILDER_HPP
