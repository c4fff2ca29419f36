#ifndef RESOURCETUNE_MODEL_HPP
#define RESOURCETUNE_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "resourcetune/interval.hpp"

namespace rtune {

/// Static description of the receiver system a tuning plan drives.
struct SystemSpec {
    int node_count = 4;
    int receivers_per_node = 2;
    int steps_per_plan = 10;
    std::vector<Shape> allowed_shapes;
    SingleInterval frequency_domain{10000.0, 16000.0};
    double plan_duration_seconds = 2.0;

    int receiver_total() const { return node_count * receivers_per_node; }
};

/// The system used throughout the experiments: 4 nodes x 2 receivers,
/// 10 steps per plan, shapes {(y) | y integer, 10 <= y <= 100} plus
/// (100, 100, 100), domain [10000, 16000] MHz, 2 s per plan.
inline SystemSpec experiment_spec() {
    SystemSpec spec;
    for (int y = 10; y <= 100; ++y) {
        spec.allowed_shapes.push_back(Shape{double(y)});
    }
    spec.allowed_shapes.push_back(Shape{100.0, 100.0, 100.0});
    return spec;
}

struct Emitter {
    SingleInterval band;
    double max_bandwidth = 0.0;  // receiver band width cap when observing this emitter
};

struct Track {
    int id = 0;
    std::vector<Emitter> emitters;
    double goal_rate = 0.0;
};

struct Survey {
    int id = 0;
    SingleInterval band;
    double goal_rate = 0.0;
};

struct SubSurvey {
    int survey_id = 0;
    int index = 0;  // position within the parent survey, left to right
    SingleInterval band;
    double goal_rate = 0.0;
};

/// What a configuration was constructed for.
struct ParentRef {
    enum class Kind : std::uint8_t { emitter, subsurvey, tile };
    Kind kind = Kind::emitter;
    int primary = 0;    // track index or survey id (tile: tile index)
    int secondary = 0;  // emitter index within the track or sub-survey index
};

/// A shaped multiple-interval a receiver can be tuned to, together with its
/// precomputed observation sets. Weight 4 occupies one receiver on every
/// node (and is the only way to observe tracks); weight 1 occupies a single
/// receiver and can realize only sub-surveys.
struct Configuration {
    MultipleInterval body;
    int weight = 4;                        // 1 or 4
    std::vector<int> observed_tracks;      // sorted track indices
    std::vector<int> observed_subsurveys;  // sorted sub-survey indices
    ParentRef parent;
};

/// True iff the configuration statically observes the track: weight 4 and
/// some emitter band fits in one of the body's bands whose width respects
/// the emitter's bandwidth cap.
inline bool config_observes_track(const Configuration& c, const Track& track) {
    if (c.weight != 4) return false;
    for (const Emitter& e : track.emitters) {
        for (const SingleInterval& s : c.body.singles()) {
            if (s.contains(e.band) && s.width() <= e.max_bandwidth) return true;
        }
    }
    return false;
}

/// True iff some band of the body contains the sub-survey band entirely.
/// No bandwidth cap applies and any weight qualifies.
inline bool config_observes_subsurvey(const Configuration& c, const SubSurvey& ss) {
    return c.body.any_single_contains(ss.band);
}

/// One receiver cell of a tuning plan: the tuned body plus a back-reference
/// to the configuration it came from (-1 when the cell was set directly).
struct Cell {
    MultipleInterval body;
    int config_id = -1;
};

/// Where a configuration goes: the step plus the exact receiver cells to
/// fill; one (node, receiver) pair for weight 1, one pair per node (nodes
/// ascending) for weight 4.
struct Position {
    int step = 0;
    std::vector<std::pair<int, int>> cells;

    friend bool operator==(const Position&, const Position&) = default;
};

/// node x receiver x step grid of optional receiver bodies.
class TuningPlan {
public:
    TuningPlan() = default;
    TuningPlan(int nodes, int receivers, int steps)
        : nodes_(nodes), receivers_(receivers), steps_(steps),
          cells_(std::size_t(nodes) * receivers * steps) {
        if (nodes < 1 || receivers < 1 || steps < 1) {
            throw std::invalid_argument("TuningPlan: all dimensions must be >= 1");
        }
    }
    explicit TuningPlan(const SystemSpec& spec)
        : TuningPlan(spec.node_count, spec.receivers_per_node, spec.steps_per_plan) {}

    int node_count() const { return nodes_; }
    int receivers_per_node() const { return receivers_; }
    int steps_per_plan() const { return steps_; }

    const std::optional<Cell>& cell(int node, int receiver, int step) const {
        return cells_[index(node, receiver, step)];
    }

    void set_cell(int node, int receiver, int step, Cell cell) {
        cells_[index(node, receiver, step)] = std::move(cell);
    }

    bool occupied(int node, int receiver, int step) const {
        return cells_[index(node, receiver, step)].has_value();
    }

    int occupied_cell_count() const {
        int n = 0;
        for (const auto& c : cells_) n += c.has_value() ? 1 : 0;
        return n;
    }

    friend bool operator==(const TuningPlan& a, const TuningPlan& b) {
        if (a.nodes_ != b.nodes_ || a.receivers_ != b.receivers_ || a.steps_ != b.steps_) {
            return false;
        }
        for (std::size_t i = 0; i < a.cells_.size(); ++i) {
            const auto& x = a.cells_[i];
            const auto& y = b.cells_[i];
            if (x.has_value() != y.has_value()) return false;
            if (x && x->body != y->body) return false;
        }
        return true;
    }

private:
    std::size_t index(int node, int receiver, int step) const {
        if (node < 0 || node >= nodes_ || receiver < 0 || receiver >= receivers_ ||
            step < 0 || step >= steps_) {
            throw std::out_of_range("TuningPlan: cell index out of range");
        }
        return (std::size_t(node) * receivers_ + receiver) * steps_ + step;
    }

    int nodes_ = 0;
    int receivers_ = 0;
    int steps_ = 0;
    std::vector<std::optional<Cell>> cells_;
};

/// Inserts the configuration at the position. All referenced cells must be
/// empty and the position arity must match the weight.
inline void insert(TuningPlan& plan, const Configuration& c, const Position& q,
                   int config_id = -1) {
    if (c.weight == 1) {
        if (q.cells.size() != 1) {
            throw std::invalid_argument("insert: weight-1 position needs one cell");
        }
    } else if (c.weight == 4) {
        if (int(q.cells.size()) != plan.node_count()) {
            throw std::invalid_argument("insert: weight-4 position needs one cell per node");
        }
        for (int n = 0; n < plan.node_count(); ++n) {
            if (q.cells[n].first != n) {
                throw std::invalid_argument("insert: weight-4 position must list nodes in order");
            }
        }
    } else {
        throw std::invalid_argument("insert: weight must be 1 or 4");
    }
    for (const auto& [node, receiver] : q.cells) {
        if (plan.occupied(node, receiver, q.step)) {
            throw std::invalid_argument("insert: cell already occupied");
        }
    }
    for (const auto& [node, receiver] : q.cells) {
        plan.set_cell(node, receiver, q.step, Cell{c.body, config_id});
    }
}

/// Number of weight-4 configurations the plan can still accept: the sum over
/// steps of the per-step minimum across nodes of free receiver cells.
inline int plan_cohesion(const TuningPlan& plan) {
    int total = 0;
    for (int t = 0; t < plan.steps_per_plan(); ++t) {
        int step_min = std::numeric_limits<int>::max();
        for (int n = 0; n < plan.node_count(); ++n) {
            int free_cells = 0;
            for (int r = 0; r < plan.receivers_per_node(); ++r) {
                free_cells += plan.occupied(n, r, t) ? 0 : 1;
            }
            step_min = std::min(step_min, free_cells);
        }
        total += step_min;
    }
    return total;
}

/// Union of everything any receiver observes during the step.
inline MultipleInterval step_coverage(const TuningPlan& plan, int step) {
    std::vector<SingleInterval> singles;
    for (int n = 0; n < plan.node_count(); ++n) {
        for (int r = 0; r < plan.receivers_per_node(); ++r) {
            const auto& c = plan.cell(n, r, step);
            if (c) {
                singles.insert(singles.end(), c->body.singles().begin(),
                               c->body.singles().end());
            }
        }
    }
    return MultipleInterval(std::move(singles));
}

/// Bodies present (as exact multiple-intervals) on every node at the step.
inline std::vector<MultipleInterval> common_bodies_in_step(const TuningPlan& plan, int step) {
    std::vector<MultipleInterval> common;
    for (int r = 0; r < plan.receivers_per_node(); ++r) {
        const auto& c = plan.cell(0, r, step);
        if (!c) continue;
        bool everywhere = true;
        for (int n = 1; n < plan.node_count() && everywhere; ++n) {
            bool found = false;
            for (int r2 = 0; r2 < plan.receivers_per_node() && !found; ++r2) {
                const auto& c2 = plan.cell(n, r2, step);
                found = c2 && c2->body == c->body;
            }
            everywhere = found;
        }
        if (everywhere && std::find(common.begin(), common.end(), c->body) == common.end()) {
            common.push_back(c->body);
        }
    }
    return common;
}

/// A track is observed in a step iff some multiple-interval is tuned on at
/// least one receiver of every node and one of the track's emitters fits in
/// one of its bands under the bandwidth cap. Body comparison is exact.
inline bool track_observed_in_step(const TuningPlan& plan, int step, const Track& track) {
    for (const MultipleInterval& m : common_bodies_in_step(plan, step)) {
        for (const Emitter& e : track.emitters) {
            for (const SingleInterval& s : m.singles()) {
                if (s.contains(e.band) && s.width() <= e.max_bandwidth) return true;
            }
        }
    }
    return false;
}

/// A sub-survey is observed in a step iff any single receiver's body has a
/// band containing the sub-survey band entirely.
inline bool subsurvey_observed_in_step(const TuningPlan& plan, int step, const SubSurvey& ss) {
    for (int n = 0; n < plan.node_count(); ++n) {
        for (int r = 0; r < plan.receivers_per_node(); ++r) {
            const auto& c = plan.cell(n, r, step);
            if (c && c->body.any_single_contains(ss.band)) return true;
        }
    }
    return false;
}

}  // namespace rtune

#endif  // RESOURCETUNE_MODEL_HPP
