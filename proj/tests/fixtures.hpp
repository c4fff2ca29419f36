#ifndef RESOURCETUNE_TESTS_FIXTURES_HPP
#define RESOURCETUNE_TESTS_FIXTURES_HPP

#include <vector>

#include "resourcetune/model.hpp"

namespace fixtures {

using rtune::Cell;
using rtune::Emitter;
using rtune::MultipleInterval;
using rtune::SingleInterval;
using rtune::Survey;
using rtune::SystemSpec;
using rtune::Track;
using rtune::TuningPlan;

inline std::vector<Track> worked_example_tracks() {
    return {
        Track{0, {Emitter{{10970.0, 10990.0}, 100.0}, Emitter{{11840.0, 11900.0}, 100.0}}, 0.3},
        Track{1, {Emitter{{10545.0, 10600.0}, 100.0}, Emitter{{11005.0, 11050.0}, 100.0}}, 0.5},
        Track{2, {Emitter{{10200.0, 10230.0}, 50.0}}, 0.2},
    };
}

inline std::vector<Survey> worked_example_surveys() {
    return {
        Survey{0, {11350.0, 11900.0}, 0.4},
        Survey{1, {10900.0, 11250.0}, 0.5},
        Survey{2, {10100.0, 10750.0}, 0.3},
    };
}

inline MultipleInterval band(double lo, double hi) {
    return MultipleInterval({SingleInterval(lo, hi)});
}

inline MultipleInterval bands(double lo1, double hi1, double lo2, double hi2) {
    return MultipleInterval({SingleInterval(lo1, hi1), SingleInterval(lo2, hi2)});
}

/// A 4x2x10 plan that fully observes the worked-example tasks: track bodies
/// are tuned on every node in the steps that realize the goal rates, and
/// spread-out single cells give each survey full-band coverage in exactly
/// goal_rate * 10 steps.
inline TuningPlan worked_example_plan() {
    TuningPlan plan(4, 2, 10);
    const MultipleInterval track_a = band(10970.0, 11070.0);   // tracks 0 and 1
    const MultipleInterval track_b = band(10545.0, 10645.0);   // track 1
    const MultipleInterval track_c = band(10190.0, 10240.0);   // track 2 (cap 50)

    const MultipleInterval s1_a = bands(11350.0, 11450.0, 11550.0, 11650.0);
    const MultipleInterval s1_b = bands(11450.0, 11550.0, 11650.0, 11750.0);
    const MultipleInterval s1_c = bands(11750.0, 11850.0, 11950.0, 12050.0);
    const MultipleInterval s1_d = band(11800.0, 11900.0);

    const MultipleInterval s2_a = bands(10900.0, 11000.0, 11100.0, 11200.0);
    const MultipleInterval s2_b = bands(11000.0, 11100.0, 11200.0, 11300.0);

    const MultipleInterval s3_a = bands(10100.0, 10200.0, 10300.0, 10400.0);
    const MultipleInterval s3_b = bands(10200.0, 10300.0, 10400.0, 10500.0);
    const MultipleInterval s3_c = bands(10500.0, 10600.0, 10700.0, 10800.0);
    const MultipleInterval s3_d = bands(10600.0, 10700.0, 10800.0, 10900.0);

    auto put = [&plan](int node, int receiver, int step, const MultipleInterval& body) {
        plan.set_cell(node, receiver, step, Cell{body, -1});
    };
    auto put_on_all_nodes = [&](int step, const MultipleInterval& body) {
        for (int n = 0; n < 4; ++n) put(n, 0, step, body);
    };

    for (int step : {0, 8, 9}) put_on_all_nodes(step, track_a);
    for (int step : {3, 7}) put_on_all_nodes(step, track_b);
    for (int step : {1, 2}) put_on_all_nodes(step, track_c);

    for (int step : {0, 1, 7, 8}) {
        put(0, 1, step, s1_a);
        put(1, 1, step, s1_b);
        put(2, 1, step, s1_c);
        put(3, 1, step, s1_d);
    }
    for (int step : {3, 9}) {
        put(0, 1, step, s2_a);
        put(1, 1, step, s2_b);
    }
    for (int step : {4, 5, 6}) {
        put(0, 0, step, s2_a);
        put(0, 1, step, s2_b);
        put(1, 0, step, s3_a);
        put(1, 1, step, s3_b);
        put(2, 0, step, s3_c);
        put(2, 1, step, s3_d);
    }
    return plan;
}

}  // namespace fixtures

#endif  // RESOURCETUNE_TESTS_FIXTURES_HPP
