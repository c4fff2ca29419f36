#ifndef RESOURCETUNE_PREPROCESS_HPP
#define RESOURCETUNE_PREPROCESS_HPP

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "resourcetune/interval.hpp"
#include "resourcetune/model.hpp"

namespace rtune {

enum class ConstructionVariant { left_right, centered, left_center_right, baseline };

struct PreprocessParams {
    double split_size = 5.0;  // sub-survey band width k
    ConstructionVariant variant = ConstructionVariant::left_right;
};

/// Splits every survey band left to right into pieces of width k (the last
/// piece may be shorter). Goal rates carry over unchanged.
inline std::vector<SubSurvey> split_surveys(const std::vector<Survey>& surveys, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("split_surveys: k must be > 0");
    std::vector<SubSurvey> out;
    for (const Survey& s : surveys) {
        const int pieces = int(std::ceil(s.band.width() / k));
        for (int y = 1; y <= pieces; ++y) {
            const double lo = s.band.lo + double(y - 1) * k;
            const double hi = std::min(s.band.lo + double(y) * k, s.band.hi);
            out.push_back(SubSurvey{s.id, y - 1, SingleInterval(lo, hi), s.goal_rate});
        }
    }
    return out;
}

/// Shape maximizing the total observed width among shapes whose every band
/// width y satisfies parent_width <= y <= cap. First maximal shape in input
/// order wins ties. Use cap = +infinity for sub-surveys.
inline std::optional<Shape> select_shape(double parent_width, double cap,
                                         const std::vector<Shape>& shapes) {
    const Shape* best = nullptr;
    double best_width = -1.0;
    for (const Shape& shape : shapes) {
        bool feasible = true;
        for (std::size_t i = 0; i < shape.single_count() && feasible; ++i) {
            const double y = shape.single_width(i);
            feasible = parent_width <= y && y <= cap;
        }
        if (feasible && shape.observed_width() > best_width) {
            best = &shape;
            best_width = shape.observed_width();
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

struct BuildResult {
    std::vector<Configuration> configs;
    std::vector<ParentRef> infeasible_parents;  // no allowed shape fits; skipped
    int skipped_placements = 0;                 // placements rejected for lo <= 0
};

namespace detail {

struct Parent {
    ParentRef ref;
    SingleInterval band;
    double cap = 0.0;  // +infinity for sub-surveys
};

inline std::vector<Parent> collect_parents(const std::vector<Track>& tracks,
                                           const std::vector<SubSurvey>& subsurveys) {
    std::vector<Parent> parents;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t e = 0; e < tracks[i].emitters.size(); ++e) {
            parents.push_back(Parent{
                ParentRef{ParentRef::Kind::emitter, int(i), int(e)},
                tracks[i].emitters[e].band, tracks[i].emitters[e].max_bandwidth});
        }
    }
    for (std::size_t i = 0; i < subsurveys.size(); ++i) {
        parents.push_back(Parent{
            ParentRef{ParentRef::Kind::subsurvey, subsurveys[i].survey_id, int(i)},
            subsurveys[i].band, std::numeric_limits<double>::infinity()});
    }
    return parents;
}

enum class Alignment { left, center, right };

// Body whose designated band is aligned to the parent; nullopt when the
// placement would start at or below frequency zero.
inline std::optional<MultipleInterval> place(const Shape& shape, std::size_t single_idx,
                                             const SingleInterval& parent, Alignment align) {
    const double width = shape.single_width(single_idx);
    double single_lo = 0.0;
    switch (align) {
        case Alignment::left: single_lo = parent.hi - width; break;
        case Alignment::right: single_lo = parent.lo; break;
        case Alignment::center: single_lo = (parent.lo + parent.hi) / 2.0 - width / 2.0; break;
    }
    const double origin = single_lo - shape.single_offset(single_idx);
    if (!(origin > 0.0)) return std::nullopt;
    return realize_shape(shape, origin);
}

inline void compute_observation_sets(std::vector<Configuration>& configs,
                                     const std::vector<Track>& tracks,
                                     const std::vector<SubSurvey>& subsurveys) {
    for (Configuration& c : configs) {
        c.observed_tracks.clear();
        c.observed_subsurveys.clear();
        if (c.weight == 4) {
            for (std::size_t i = 0; i < tracks.size(); ++i) {
                if (config_observes_track(c, tracks[i])) c.observed_tracks.push_back(int(i));
            }
        }
        for (std::size_t i = 0; i < subsurveys.size(); ++i) {
            if (config_observes_subsurvey(c, subsurveys[i])) {
                c.observed_subsurveys.push_back(int(i));
            }
        }
    }
}

inline BuildResult build_with_alignments(const std::vector<Track>& tracks,
                                         const std::vector<SubSurvey>& subsurveys,
                                         const std::vector<Shape>& shapes,
                                         const std::vector<Alignment>& alignments) {
    BuildResult result;
    for (const Parent& parent : collect_parents(tracks, subsurveys)) {
        const auto shape = select_shape(parent.band.width(), parent.cap, shapes);
        if (!shape) {
            result.infeasible_parents.push_back(parent.ref);
            continue;
        }
        for (std::size_t s = 0; s < shape->single_count(); ++s) {
            for (Alignment align : alignments) {
                auto body = place(*shape, s, parent.band, align);
                if (!body) {
                    ++result.skipped_placements;
                    continue;
                }
                result.configs.push_back(Configuration{std::move(*body), 4, {}, {}, parent.ref});
            }
        }
    }
    // Weight-1 duplicates of every constructed configuration.
    const std::size_t weight4_count = result.configs.size();
    result.configs.reserve(2 * weight4_count);
    for (std::size_t i = 0; i < weight4_count; ++i) {
        Configuration dup = result.configs[i];
        dup.weight = 1;
        result.configs.push_back(std::move(dup));
    }
    compute_observation_sets(result.configs, tracks, subsurveys);
    return result;
}

}  // namespace detail

/// Left-right heuristic: per parent and designated band, the leftmost and
/// rightmost placements that still observe the parent.
inline BuildResult build_left_right(const std::vector<Track>& tracks,
                                    const std::vector<SubSurvey>& subsurveys,
                                    const std::vector<Shape>& shapes) {
    return detail::build_with_alignments(tracks, subsurveys, shapes,
                                         {detail::Alignment::left, detail::Alignment::right});
}

/// One placement per designated band, centered on the parent.
inline BuildResult build_centered(const std::vector<Track>& tracks,
                                  const std::vector<SubSurvey>& subsurveys,
                                  const std::vector<Shape>& shapes) {
    return detail::build_with_alignments(tracks, subsurveys, shapes,
                                         {detail::Alignment::center});
}

/// Union of the left-right and centered constructions.
inline BuildResult build_left_center_right(const std::vector<Track>& tracks,
                                           const std::vector<SubSurvey>& subsurveys,
                                           const std::vector<Shape>& shapes) {
    return detail::build_with_alignments(
        tracks, subsurveys, shapes,
        {detail::Alignment::left, detail::Alignment::center, detail::Alignment::right});
}

struct BaselineResult {
    std::vector<Configuration> configs;
    std::vector<SubSurvey> subsurveys;
    std::vector<ParentRef> infeasible_parents;
};

/// Baseline construction shared by the greedy and GA comparison algorithms:
/// the frequency domain is tiled left to right with (100, 100, 100) bodies
/// (weight 4, each duplicated at weight 1), surveys are split at the tiles'
/// band edges, and each emitter gets one centered weight-4 configuration.
inline BaselineResult build_baseline_configurations(const std::vector<Track>& tracks,
                                                    const std::vector<Survey>& surveys,
                                                    const SystemSpec& spec) {
    BaselineResult result;
    const Shape tile_shape{100.0, 100.0, 100.0};
    const double span = tile_shape.span();

    std::vector<double> edges;
    int tile_count = 0;
    for (double origin = spec.frequency_domain.lo;
         origin + span <= spec.frequency_domain.hi; origin += span) {
        MultipleInterval body = realize_shape(tile_shape, origin);
        for (const SingleInterval& s : body.singles()) {
            edges.push_back(s.lo);
            edges.push_back(s.hi);
        }
        result.configs.push_back(Configuration{
            std::move(body), 4, {}, {}, ParentRef{ParentRef::Kind::tile, tile_count, 0}});
        ++tile_count;
    }
    const int weight4_tiles = int(result.configs.size());
    for (int i = 0; i < weight4_tiles; ++i) {
        Configuration dup = result.configs[i];
        dup.weight = 1;
        result.configs.push_back(std::move(dup));
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Sub-surveys are cut at every tile band edge inside the survey band.
    for (const Survey& survey : surveys) {
        std::vector<double> cuts{survey.band.lo};
        for (double e : edges) {
            if (e > survey.band.lo && e < survey.band.hi) cuts.push_back(e);
        }
        cuts.push_back(survey.band.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            result.subsurveys.push_back(SubSurvey{
                survey.id, int(i), SingleInterval(cuts[i], cuts[i + 1]), survey.goal_rate});
        }
    }

    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t e = 0; e < tracks[i].emitters.size(); ++e) {
            const Emitter& emitter = tracks[i].emitters[e];
            const auto shape = select_shape(emitter.band.width(), emitter.max_bandwidth,
                                            spec.allowed_shapes);
            const ParentRef ref{ParentRef::Kind::emitter, int(i), int(e)};
            if (!shape) {
                result.infeasible_parents.push_back(ref);
                continue;
            }
            auto body = detail::place(*shape, 0, emitter.band, detail::Alignment::center);
            if (!body) continue;
            result.configs.push_back(Configuration{std::move(*body), 4, {}, {}, ref});
        }
    }

    detail::compute_observation_sets(result.configs, tracks, result.subsurveys);
    return result;
}

/// Keeps the first configuration per distinct (weight, observed tracks,
/// observed sub-surveys) triple and drops configurations observing nothing.
inline std::vector<Configuration> dedup_unique_observation_sets(
    std::vector<Configuration> configs) {
    std::map<std::vector<int>, bool> seen;
    std::vector<Configuration> unique;
    unique.reserve(configs.size());
    for (Configuration& c : configs) {
        if (c.observed_tracks.empty() && c.observed_subsurveys.empty()) continue;
        std::vector<int> key;
        key.reserve(2 + c.observed_tracks.size() + c.observed_subsurveys.size());
        key.push_back(c.weight);
        key.insert(key.end(), c.observed_tracks.begin(), c.observed_tracks.end());
        key.push_back(-1);
        key.insert(key.end(), c.observed_subsurveys.begin(), c.observed_subsurveys.end());
        if (seen.emplace(std::move(key), true).second) {
            unique.push_back(std::move(c));
        }
    }
    return unique;
}

/// Number of configuration parents: all emitters plus all sub-surveys after
/// splitting with the given k.
inline int parent_count(const std::vector<Track>& tracks, const std::vector<Survey>& surveys,
                        double k) {
    int n = 0;
    for (const Track& t : tracks) n += int(t.emitters.size());
    for (const Survey& s : surveys) n += int(std::ceil(s.band.width() / k));
    return n;
}

}  // namespace rtune

#endif  // RESOURCETUNE_PREPROCESS_HPP
