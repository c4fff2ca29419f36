#ifndef RESOURCETUNE_SCENARIO_HPP
#define RESOURCETUNE_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "resourcetune/model.hpp"
#include "resourcetune/rng.hpp"

namespace rtune {

/// Knobs of the random instance generator. Defaults reproduce the benchmark
/// scenario family: 50 tracks with 1-3 emitters of width 1-50 MHz inside
/// [10000, 16000], bandwidth cap 100 with probability 0.75, and 10 surveys
/// partitioning the domain.
struct ScenarioParams {
    double utilization = 1.0;       // expected fraction of receiver capacity demanded
    double track_proportion = 0.5;  // share of that demand allocated to tracks
    int track_count = 50;
    int survey_count = 10;
    int emitters_min = 1;
    int emitters_max = 3;
    double emitter_width_min = 1.0;
    double emitter_width_max = 50.0;
    SingleInterval domain{10000.0, 16000.0};
    double bandwidth_cap_prob = 0.75;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(utilization > 0.0)) throw std::invalid_argument("utilization must be > 0");
        if (track_proportion < 0.0 || track_proportion > 1.0) {
            throw std::invalid_argument("track_proportion must be in [0,1]");
        }
        if (track_count < 0 || survey_count < 0) {
            throw std::invalid_argument("task counts must be >= 0");
        }
        if (emitters_min < 1 || emitters_max < emitters_min) {
            throw std::invalid_argument("emitter count range invalid");
        }
        if (!(emitter_width_min > 0.0) || emitter_width_max < emitter_width_min) {
            throw std::invalid_argument("emitter width range invalid");
        }
        if (emitter_width_max > domain.width()) {
            throw std::invalid_argument("emitter width exceeds the frequency domain");
        }
    }
};

struct InstanceMeta {
    std::uint64_t seed = 0;
    double utilization = 0.0;
    double track_proportion = 0.0;
};

/// One experiment input: tasks plus the system they run on.
struct Instance {
    std::string id;
    SystemSpec spec;
    std::vector<Track> tracks;
    std::vector<Survey> surveys;
    InstanceMeta meta;
};

struct Utilization {
    double tracks = 0.0;
    double surveys = 0.0;
    double total = 0.0;
};

/// Expected resource utilization of a task set under the experiment system:
/// tracks cost their goal rates against the 2 receivers per node, surveys
/// cost goal rate times the number of 200 MHz-wide receiver settings needed,
/// against all 8 receivers.
inline Utilization expected_utilization(const std::vector<Track>& tracks,
                                        const std::vector<Survey>& surveys) {
    Utilization u;
    for (const Track& t : tracks) u.tracks += t.goal_rate;
    u.tracks /= 2.0;
    for (const Survey& s : surveys) {
        u.surveys += s.goal_rate * std::ceil(s.band.width() / 200.0);
    }
    u.surveys /= 8.0;
    u.total = u.tracks + u.surveys;
    return u;
}

namespace detail {

// Scales raw rates by a common factor so that sum(rate * weight) hits the
// target; rates capped at 1 with the residual redistributed proportionally
// over the uncapped ones.
inline std::vector<double> scale_rates(const std::vector<double>& raw,
                                       const std::vector<double>& weights, double target) {
    std::vector<double> rates(raw.size(), 0.0);
    if (raw.empty()) {
        if (target > 0.0) throw std::invalid_argument("scale_rates: no tasks for demand");
        return rates;
    }
    std::vector<char> capped(raw.size(), 0);
    double remaining = target;
    for (int round = 0; round < int(raw.size()) + 1; ++round) {
        double free_mass = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!capped[i]) free_mass += raw[i] * weights[i];
        }
        if (free_mass <= 0.0) {
            if (remaining > 1e-12) {
                throw std::invalid_argument("scale_rates: demand exceeds all-one rates");
            }
            return rates;
        }
        const double factor = remaining / free_mass;
        bool new_cap = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (capped[i]) continue;
            if (raw[i] * factor > 1.0) {
                capped[i] = 1;
                rates[i] = 1.0;
                remaining -= weights[i];
                new_cap = true;
            }
        }
        if (!new_cap) {
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (!capped[i]) rates[i] = raw[i] * factor;
            }
            return rates;
        }
    }
    throw std::logic_error("scale_rates: did not converge");
}

}  // namespace detail

/// Draws a random instance. Deterministic given the seed: every track and
/// survey consumes its own named sub-stream, so edits to one sampling site
/// do not shift the others.
inline Instance generate_instance(const ScenarioParams& params) {
    params.validate();
    Instance instance;
    instance.spec = experiment_spec();
    instance.spec.frequency_domain = params.domain;
    instance.meta = InstanceMeta{params.seed, params.utilization, params.track_proportion};

    std::vector<double> track_raw(params.track_count, 0.0);
    for (int i = 0; i < params.track_count; ++i) {
        rng::SplitMix64 gen = rng::substream(params.seed, "track", std::uint64_t(i));
        Track track;
        track.id = i;
        const int emitter_count =
            int(gen.uniform_int(std::uint64_t(params.emitters_min),
                                std::uint64_t(params.emitters_max)));
        for (int e = 0; e < emitter_count; ++e) {
            const double width = gen.uniform(params.emitter_width_min, params.emitter_width_max);
            const double lo = gen.uniform(params.domain.lo, params.domain.hi - width);
            double cap = 100.0;
            if (!gen.bernoulli(params.bandwidth_cap_prob)) cap = gen.uniform(width, 100.0);
            track.emitters.push_back(Emitter{SingleInterval(lo, lo + width), cap});
        }
        track_raw[i] = gen.next_double_open_closed();
        instance.tracks.push_back(std::move(track));
    }

    // Survey bands partition the domain at survey_count - 1 sorted cuts.
    std::vector<double> cuts;
    if (params.survey_count > 0) {
        rng::SplitMix64 gen = rng::substream(params.seed, "survey-cuts");
        while (true) {
            cuts.assign(1, params.domain.lo);
            for (int i = 0; i < params.survey_count - 1; ++i) {
                cuts.push_back(gen.uniform(params.domain.lo, params.domain.hi));
            }
            cuts.push_back(params.domain.hi);
            std::sort(cuts.begin(), cuts.end());
            bool strict = true;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                strict &= cuts[i] < cuts[i + 1];
            }
            if (strict) break;
        }
    }
    std::vector<double> survey_raw(params.survey_count, 0.0);
    std::vector<double> survey_weight(params.survey_count, 0.0);
    for (int i = 0; i < params.survey_count; ++i) {
        rng::SplitMix64 gen = rng::substream(params.seed, "survey", std::uint64_t(i));
        Survey survey;
        survey.id = i;
        survey.band = SingleInterval(cuts[i], cuts[i + 1]);
        survey_raw[i] = gen.next_double_open_closed();
        survey_weight[i] = std::ceil(survey.band.width() / 200.0);
        instance.surveys.push_back(std::move(survey));
    }

    // Normalize goal rates so the demanded utilization splits exactly into
    // p*U for tracks and (1-p)*U for surveys.
    const double track_target = 2.0 * params.track_proportion * params.utilization;
    const double survey_target = 8.0 * (1.0 - params.track_proportion) * params.utilization;
    const std::vector<double> track_rates =
        detail::scale_rates(track_raw, std::vector<double>(track_raw.size(), 1.0), track_target);
    const std::vector<double> survey_rates =
        detail::scale_rates(survey_raw, survey_weight, survey_target);
    for (int i = 0; i < params.track_count; ++i) instance.tracks[i].goal_rate = track_rates[i];
    for (int i = 0; i < params.survey_count; ++i) instance.surveys[i].goal_rate = survey_rates[i];
    return instance;
}

}  // namespace rtune

#endif  // RESOURCETUNE_SCENARIO_HPP
