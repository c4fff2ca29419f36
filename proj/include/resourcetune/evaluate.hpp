#ifndef RESOURCETUNE_EVALUATE_HPP
#define RESOURCETUNE_EVALUATE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "resourcetune/interval.hpp"
#include "resourcetune/model.hpp"

namespace rtune {

/// Proportion of steps in which the track is observed by the plan.
inline double realized_track_rate(const TuningPlan& plan, const Track& track) {
    int observed = 0;
    for (int t = 0; t < plan.steps_per_plan(); ++t) {
        observed += track_observed_in_step(plan, t, track) ? 1 : 0;
    }
    return double(observed) / double(plan.steps_per_plan());
}

/// Proportion of steps in which the sub-survey is observed by the plan.
inline double realized_subsurvey_rate(const TuningPlan& plan, const SubSurvey& ss) {
    int observed = 0;
    for (int t = 0; t < plan.steps_per_plan(); ++t) {
        observed += subsurvey_observed_in_step(plan, t, ss) ? 1 : 0;
    }
    return double(observed) / double(plan.steps_per_plan());
}

namespace detail {

/// Piecewise-constant per-frequency observation counts over one survey band.
/// Segment i spans [points[i], points[i+1]) and was observed counts[i] times
/// in total across all added plan steps. The counting function only changes
/// at coverage endpoints, so the survey integral over it is exact.
class CoverageProfile {
public:
    explicit CoverageProfile(SingleInterval band)
        : band_(band), points_{band.lo, band.hi}, counts_{0} {}

    const SingleInterval& band() const { return band_; }
    const std::vector<double>& points() const { return points_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    /// Counts one observation of every frequency in `covered` (one step's
    /// coverage). Parts outside the survey band are ignored.
    void add(const MultipleInterval& covered) {
        for (const SingleInterval& s : covered.singles()) {
            const double lo = std::max(s.lo, band_.lo);
            const double hi = std::min(s.hi, band_.hi);
            if (lo >= hi) continue;
            const std::size_t a = split_at(lo);
            const std::size_t b = split_at(hi);
            for (std::size_t i = a; i < b; ++i) counts_[i] += 1;
        }
    }

    std::int64_t count_at(double f) const {
        // Right-open segments; the final endpoint has measure zero and maps
        // to the last segment.
        auto it = std::upper_bound(points_.begin(), points_.end(), f);
        std::size_t idx = std::size_t(it - points_.begin());
        if (idx == 0) return 0;
        if (idx > counts_.size()) idx = counts_.size();
        return counts_[idx - 1];
    }

private:
    // Ensures `x` is a breakpoint and returns its segment index.
    std::size_t split_at(double x) {
        auto it = std::lower_bound(points_.begin(), points_.end(), x);
        std::size_t idx = std::size_t(it - points_.begin());
        if (it != points_.end() && *it == x) return idx;
        points_.insert(it, x);
        counts_.insert(counts_.begin() + (idx - 1), counts_[idx - 1]);
        return idx;
    }

    SingleInterval band_;
    std::vector<double> points_;
    std::vector<std::int64_t> counts_;
};

// +1/-1 coverage boundary events of one plan clipped to a band, sorted.
inline std::vector<std::pair<double, int>> coverage_events(
    std::span<const MultipleInterval> step_coverages, const SingleInterval& band) {
    std::vector<std::pair<double, int>> events;
    for (const MultipleInterval& cov : step_coverages) {
        for (const SingleInterval& s : cov.singles()) {
            const double lo = std::max(s.lo, band.lo);
            const double hi = std::min(s.hi, band.hi);
            if (lo >= hi) continue;
            events.emplace_back(lo, +1);
            events.emplace_back(hi, -1);
        }
    }
    std::sort(events.begin(), events.end());
    return events;
}

/// Integral of max{0, g - (profile + extra events) / denominator} over the
/// band, divided by the band width. `denominator` is |P| * |T|.
inline double deficit_over(const CoverageProfile& profile,
                           std::span<const std::pair<double, int>> extra_events,
                           double goal_rate, double denominator) {
    const SingleInterval& band = profile.band();
    double integral = 0.0;
    double at = band.lo;
    std::size_t seg = 0;
    std::size_t ev = 0;
    std::int64_t extra = 0;
    while (at < band.hi) {
        while (ev < extra_events.size() && extra_events[ev].first <= at) {
            extra += extra_events[ev].second;
            ++ev;
        }
        while (seg + 1 < profile.points().size() && profile.points()[seg + 1] <= at) ++seg;
        double next = profile.points()[seg + 1];
        if (ev < extra_events.size()) next = std::min(next, extra_events[ev].first);
        const double count = double(profile.counts()[seg] + extra);
        const double deficit = goal_rate - count / denominator;
        if (deficit > 0.0) integral += deficit * (next - at);
        at = next;
    }
    return integral / band.width();
}

}  // namespace detail

/// Objective breakdown for a plan sequence.
struct EvaluationReport {
    double total = 0.0;
    std::map<int, double> per_track;   // track id -> deficit
    std::map<int, double> per_survey;  // survey id -> deficit
    std::vector<std::vector<double>> realized_track_rates;  // [plan][track index]
    int plan_count = 0;
};

/// Incremental objective evaluation over a growing plan sequence. Plans are
/// folded into per-track observation counts and per-survey coverage
/// profiles, so scoring a candidate plan against the whole history costs
/// only the candidate's own sweep.
class SequenceEvaluator {
public:
    SequenceEvaluator(std::vector<Track> tracks, std::vector<Survey> surveys,
                      int steps_per_plan)
        : tracks_(std::move(tracks)), surveys_(std::move(surveys)),
          steps_per_plan_(steps_per_plan), track_observed_steps_(tracks_.size(), 0) {
        profiles_.reserve(surveys_.size());
        for (const Survey& s : surveys_) profiles_.emplace_back(s.band);
    }

    int plan_count() const { return plan_count_; }
    const std::vector<Track>& tracks() const { return tracks_; }
    const std::vector<Survey>& surveys() const { return surveys_; }

    void add_plan(const TuningPlan& plan) {
        if (plan.steps_per_plan() != steps_per_plan_) {
            throw std::invalid_argument("SequenceEvaluator: step count mismatch");
        }
        std::vector<double> rates(tracks_.size(), 0.0);
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            int observed = 0;
            for (int t = 0; t < steps_per_plan_; ++t) {
                observed += track_observed_in_step(plan, t, tracks_[i]) ? 1 : 0;
            }
            track_observed_steps_[i] += observed;
            rates[i] = double(observed) / double(steps_per_plan_);
        }
        per_plan_track_rates_.push_back(std::move(rates));
        for (int t = 0; t < steps_per_plan_; ++t) {
            const MultipleInterval cov = step_coverage(plan, t);
            for (auto& profile : profiles_) profile.add(cov);
        }
        ++plan_count_;
    }

    /// Objective over the plans added so far.
    double objective() const { return objective_impl(nullptr); }

    /// Objective over the plans added so far plus `candidate`, without
    /// mutating the accumulated state.
    double objective_with(const TuningPlan& candidate) const {
        return objective_impl(&candidate);
    }

    EvaluationReport report() const {
        if (plan_count_ == 0) {
            throw std::invalid_argument("SequenceEvaluator: no plans to evaluate");
        }
        EvaluationReport rep;
        rep.plan_count = plan_count_;
        rep.realized_track_rates = per_plan_track_rates_;
        const double denom = double(plan_count_) * double(steps_per_plan_);
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            const double avg = double(track_observed_steps_[i]) / denom;
            rep.per_track[tracks_[i].id] = std::max(0.0, tracks_[i].goal_rate - avg);
        }
        for (std::size_t i = 0; i < surveys_.size(); ++i) {
            rep.per_survey[surveys_[i].id] = detail::deficit_over(
                profiles_[i], {}, surveys_[i].goal_rate, denom);
        }
        rep.total = 0.0;
        for (const auto& [id, v] : rep.per_track) rep.total += v;
        for (const auto& [id, v] : rep.per_survey) rep.total += v;
        return rep;
    }

private:
    double objective_impl(const TuningPlan* candidate) const {
        const int plans = plan_count_ + (candidate ? 1 : 0);
        if (plans == 0) throw std::invalid_argument("SequenceEvaluator: no plans");
        const double denom = double(plans) * double(steps_per_plan_);

        std::vector<MultipleInterval> cand_coverages;
        double total = 0.0;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            std::int64_t observed = track_observed_steps_[i];
            if (candidate) {
                for (int t = 0; t < steps_per_plan_; ++t) {
                    observed += track_observed_in_step(*candidate, t, tracks_[i]) ? 1 : 0;
                }
            }
            total += std::max(0.0, tracks_[i].goal_rate - double(observed) / denom);
        }
        if (candidate) {
            cand_coverages.reserve(steps_per_plan_);
            for (int t = 0; t < steps_per_plan_; ++t) {
                cand_coverages.push_back(step_coverage(*candidate, t));
            }
        }
        for (std::size_t i = 0; i < surveys_.size(); ++i) {
            std::vector<std::pair<double, int>> events;
            if (candidate) {
                events = detail::coverage_events(cand_coverages, surveys_[i].band);
            }
            total += detail::deficit_over(profiles_[i], events, surveys_[i].goal_rate, denom);
        }
        return total;
    }

    std::vector<Track> tracks_;
    std::vector<Survey> surveys_;
    int steps_per_plan_ = 0;
    int plan_count_ = 0;
    std::vector<std::int64_t> track_observed_steps_;
    std::vector<std::vector<double>> per_plan_track_rates_;
    std::vector<detail::CoverageProfile> profiles_;
};

/// Exact per-survey deficit over a plan sequence: the normalized integral of
/// the clamped gap between the goal rate and the average per-frequency
/// observation rate. Computed by an endpoint sweep; the per-frequency count
/// is piecewise constant, so there is no quadrature error.
inline double survey_deficit(std::span<const TuningPlan> plans, const Survey& survey) {
    if (plans.empty()) throw std::invalid_argument("survey_deficit: no plans");
    detail::CoverageProfile profile(survey.band);
    for (const TuningPlan& plan : plans) {
        for (int t = 0; t < plan.steps_per_plan(); ++t) {
            profile.add(step_coverage(plan, t));
        }
    }
    const double denom = double(plans.size()) * double(plans.front().steps_per_plan());
    return detail::deficit_over(profile, {}, survey.goal_rate, denom);
}

/// Full objective over a plan sequence.
inline EvaluationReport evaluate(std::span<const TuningPlan> plans,
                                 const std::vector<Track>& tracks,
                                 const std::vector<Survey>& surveys) {
    if (plans.empty()) throw std::invalid_argument("evaluate: no plans");
    SequenceEvaluator ev(tracks, surveys, plans.front().steps_per_plan());
    for (const TuningPlan& p : plans) ev.add_plan(p);
    return ev.report();
}

}  // namespace rtune

#endif  // RESOURCETUNE_EVALUATE_HPP
