#ifndef RESOURCETUNE_RATES_HPP
#define RESOURCETUNE_RATES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "resourcetune/evaluate.hpp"
#include "resourcetune/model.hpp"
#include "resourcetune/simplex.hpp"

namespace rtune {

/// Discounted realized-rate accumulator, one entry per task (tracks first,
/// then sub-surveys). plan_index counts the plans folded in so far.
struct HistoryState {
    std::vector<double> h;
    double discount = 0.99999;
    int plan_index = 0;

    explicit HistoryState(std::size_t task_count = 0, double discount_ = 0.99999)
        : h(task_count, 0.0), discount(discount_) {
        if (!(discount > 0.0 && discount < 1.0)) {
            throw std::invalid_argument("HistoryState: discount must be in (0,1)");
        }
    }
};

/// Demand for the next plan: the rate each task must be realized at so that
/// the discounted history keeps up with the goal rate,
///     cur = (1 - g^(j+1)) / (1 - g) * goal - g * H,
/// clamped to [0, 1]. With no history this is just the goal rate.
inline std::vector<double> current_rates(const HistoryState& history,
                                         const std::vector<double>& goals) {
    if (goals.size() != history.h.size()) {
        throw std::invalid_argument("current_rates: goal/history size mismatch");
    }
    const double g = history.discount;
    const double series = (1.0 - std::pow(g, history.plan_index + 1)) / (1.0 - g);
    std::vector<double> cur(goals.size());
    for (std::size_t i = 0; i < goals.size(); ++i) {
        cur[i] = std::clamp(series * goals[i] - g * history.h[i], 0.0, 1.0);
    }
    return cur;
}

/// Realized rates of all tasks under one plan, aligned with HistoryState.
inline std::vector<double> realized_task_rates(const TuningPlan& plan,
                                               const std::vector<Track>& tracks,
                                               const std::vector<SubSurvey>& subsurveys) {
    std::vector<double> rates;
    rates.reserve(tracks.size() + subsurveys.size());
    for (const Track& t : tracks) rates.push_back(realized_track_rate(plan, t));
    for (const SubSurvey& ss : subsurveys) rates.push_back(realized_subsurvey_rate(plan, ss));
    return rates;
}

/// Folds one plan's realized rates into the history: H <- g*H + R.
inline void update_history(HistoryState& history, const TuningPlan& plan,
                           const std::vector<Track>& tracks,
                           const std::vector<SubSurvey>& subsurveys) {
    const std::vector<double> rates = realized_task_rates(plan, tracks, subsurveys);
    if (rates.size() != history.h.size()) {
        throw std::invalid_argument("update_history: task count mismatch");
    }
    for (std::size_t i = 0; i < rates.size(); ++i) {
        history.h[i] = history.discount * history.h[i] + rates[i];
    }
    ++history.plan_index;
}

/// Goal insertion rates for one cycle.
struct RateSolution {
    enum class Status { optimal, infeasible_fallback };
    std::vector<double> rates;  // aligned with the configuration list
    double objective = 0.0;
    Status status = Status::optimal;
    std::vector<int> uncovered_tasks;  // demanded but observed by no configuration
};

/// Builds the covering LP over a fixed configuration set once and re-solves
/// it each cycle with the demands of that cycle:
///
///     min sum_c w_c r_c   s.t.  sum_{c observes x} r_c >= cur_x,  r >= 0.
///
/// Tasks observed by exactly the same configurations share one constraint
/// row with the maximum of their demands; the reduction is exact and keeps
/// the LP small (neighboring sub-surveys usually share observers). Tasks
/// not observed by any configuration would make the LP infeasible; their
/// constraints are dropped up front and the affected tasks reported.
class RateOptimizer {
public:
    RateOptimizer(const std::vector<Configuration>& configs, int track_count,
                  int subsurvey_count)
        : task_count_(track_count + subsurvey_count) {
        std::vector<std::vector<int>> task_columns(task_count_);
        for (std::size_t j = 0; j < configs.size(); ++j) {
            for (int t : configs[j].observed_tracks) task_columns[t].push_back(int(j));
            for (int s : configs[j].observed_subsurveys) {
                task_columns[track_count + s].push_back(int(j));
            }
        }

        task_group_.assign(task_count_, -1);
        std::map<std::vector<int>, int> group_of;
        for (int task = 0; task < task_count_; ++task) {
            if (task_columns[task].empty()) continue;  // uncovered; no row
            const auto [it, fresh] =
                group_of.emplace(std::move(task_columns[task]), int(group_members_.size()));
            if (fresh) group_members_.push_back({});
            task_group_[task] = it->second;
            group_members_[it->second].push_back(task);
        }

        const int rows = int(group_members_.size());
        std::vector<std::vector<int>> columns(configs.size());
        std::vector<double> costs(configs.size());
        for (const auto& [task_cols, group] : group_of) {
            for (int j : task_cols) columns[j].push_back(group);
        }
        for (std::size_t j = 0; j < configs.size(); ++j) {
            std::sort(columns[j].begin(), columns[j].end());
            columns[j].erase(std::unique(columns[j].begin(), columns[j].end()),
                             columns[j].end());
            costs[j] = double(configs[j].weight);
        }
        lp_.emplace(rows, std::move(columns), std::move(costs));
    }

    RateSolution solve(const std::vector<double>& cur) {
        if (int(cur.size()) != task_count_) {
            throw std::invalid_argument("RateOptimizer: demand size mismatch");
        }
        RateSolution solution;
        std::vector<double> rhs(group_members_.size(), 0.0);
        for (int task = 0; task < task_count_; ++task) {
            if (task_group_[task] < 0) {
                if (cur[task] > 0.0) solution.uncovered_tasks.push_back(task);
            } else {
                rhs[task_group_[task]] = std::max(rhs[task_group_[task]], cur[task]);
            }
        }
        LpResult lp = lp_->solve(rhs);
        if (lp.status == LpResult::Status::infeasible) {
            // Covering LPs with every demanded row covered are always
            // feasible; reaching this means a row slipped through.
            throw std::runtime_error("RateOptimizer: unexpected infeasible LP");
        }
        solution.rates = std::move(lp.x);
        solution.objective = lp.objective;
        solution.status = solution.uncovered_tasks.empty()
                              ? RateSolution::Status::optimal
                              : RateSolution::Status::infeasible_fallback;
        return solution;
    }

private:
    int task_count_ = 0;
    std::vector<int> task_group_;                 // task -> LP row, -1 if uncovered
    std::vector<std::vector<int>> group_members_; // LP row -> tasks sharing it
    std::optional<DualSimplex> lp_;
};

/// One-shot build-and-solve over a configuration set (fresh LP each call).
inline RateSolution build_and_solve_rate_lp(const std::vector<Configuration>& configs,
                                            const std::vector<double>& cur, int track_count,
                                            int subsurvey_count) {
    RateOptimizer optimizer(configs, track_count, subsurvey_count);
    return optimizer.solve(cur);
}

}  // namespace rtune

#endif  // RESOURCETUNE_RATES_HPP
