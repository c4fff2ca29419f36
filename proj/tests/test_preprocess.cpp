#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "resourcetune/preprocess.hpp"

using namespace rtune;

namespace {

std::vector<MultipleInterval> weight4_bodies(const std::vector<Configuration>& configs) {
    std::vector<MultipleInterval> bodies;
    for (const Configuration& c : configs) {
        if (c.weight == 4) bodies.push_back(c.body);
    }
    return bodies;
}

}  // namespace

TEST_CASE("survey splitting walks left to right in k-wide pieces") {
    const Survey sigma{2, {10100.0, 10750.0}, 0.3};
    const auto subs = split_surveys({sigma}, 5.0);
    REQUIRE(subs.size() == 130);
    CHECK(subs.front().band == SingleInterval(10100.0, 10105.0));
    CHECK(subs.back().band == SingleInterval(10745.0, 10750.0));
    for (const SubSurvey& ss : subs) {
        CHECK(ss.goal_rate == 0.3);
        CHECK(ss.survey_id == 2);
        CHECK(ss.band.width() <= 5.0 + 1e-12);
    }

    const Survey short_one{0, {100.0, 107.0}, 0.5};
    const auto two = split_surveys({short_one}, 5.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].band.width() == Catch::Approx(5.0));
    CHECK(two[1].band.width() == Catch::Approx(2.0));

    const auto one = split_surveys({Survey{0, {100.0, 104.0}, 0.5}}, 5.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].band == SingleInterval(100.0, 104.0));
}

TEST_CASE("shape selection maximizes observed width under the caps") {
    const auto shapes = experiment_spec().allowed_shapes;

    const auto narrow = select_shape(30.0, 50.0, shapes);
    REQUIRE(narrow.has_value());
    CHECK(*narrow == Shape{50.0});

    const auto unbounded =
        select_shape(25.0, std::numeric_limits<double>::infinity(), shapes);
    REQUIRE(unbounded.has_value());
    CHECK(*unbounded == Shape{100.0, 100.0, 100.0});
    CHECK(unbounded->observed_width() == 200.0);

    CHECK_FALSE(select_shape(60.0, 55.0, shapes).has_value());
}

TEST_CASE("left-right construction reproduces the single-band worked case") {
    const Track track{0, {Emitter{{500.0, 525.0}, 100.0}}, 0.3};
    const auto built = build_left_right({track}, {}, {Shape{70.0}});
    const auto bodies = weight4_bodies(built.configs);
    REQUIRE(bodies.size() == 2);
    CHECK(bodies[0] == fixtures::band(455.0, 525.0));
    CHECK(bodies[1] == fixtures::band(500.0, 570.0));
    // One weight-1 duplicate per original.
    CHECK(built.configs.size() == 4);
}

TEST_CASE("left-right construction reproduces the split-band worked case") {
    const Track track{0, {Emitter{{500.0, 525.0}, 100.0}}, 0.3};
    const auto built = build_left_right({track}, {}, {Shape{50.0, 100.0, 100.0}});
    auto bodies = weight4_bodies(built.configs);
    REQUIRE(bodies.size() == 4);
    const std::vector<MultipleInterval> expected{
        fixtures::bands(275.0, 325.0, 425.0, 525.0),
        fixtures::bands(350.0, 400.0, 500.0, 600.0),
        fixtures::bands(475.0, 525.0, 625.0, 725.0),
        fixtures::bands(500.0, 550.0, 650.0, 750.0),
    };
    for (const auto& body : expected) {
        CHECK(std::count(bodies.begin(), bodies.end(), body) == 1);
    }
}

TEST_CASE("degenerate parent width collapses left and right placements") {
    const Track track{0, {Emitter{{500.0, 570.0}, 100.0}}, 0.3};
    const auto built = build_left_right({track}, {}, {Shape{70.0}});
    const auto bodies = weight4_bodies(built.configs);
    REQUIRE(bodies.size() == 2);
    CHECK(bodies[0] == bodies[1]);
    CHECK(bodies[0] == fixtures::band(500.0, 570.0));
}

TEST_CASE("centered construction places one body per band") {
    const Track track{0, {Emitter{{500.0, 525.0}, 100.0}}, 0.3};
    const auto centered = build_centered({track}, {}, {Shape{70.0}});
    const auto bodies = weight4_bodies(centered.configs);
    REQUIRE(bodies.size() == 1);
    CHECK(bodies[0] == fixtures::band(477.5, 547.5));

    const Track exact{1, {Emitter{{500.0, 570.0}, 100.0}}, 0.3};
    const auto tight = build_centered({exact}, {}, {Shape{70.0}});
    CHECK(weight4_bodies(tight.configs)[0] == fixtures::band(500.0, 570.0));
}

TEST_CASE("centered construction emits half as many configurations") {
    const auto tracks = fixtures::worked_example_tracks();
    const auto subs = split_surveys(fixtures::worked_example_surveys(), 5.0);
    const auto shapes = experiment_spec().allowed_shapes;
    const auto lr = build_left_right(tracks, subs, shapes);
    const auto c = build_centered(tracks, subs, shapes);
    CHECK(lr.configs.size() == 2 * c.configs.size());
}

TEST_CASE("left-center-right unions both constructions") {
    const Track track{0, {Emitter{{500.0, 525.0}, 100.0}}, 0.3};
    const auto lcr = build_left_center_right({track}, {}, {Shape{70.0}});
    const auto bodies = weight4_bodies(lcr.configs);
    REQUIRE(bodies.size() == 3);  // left, center, right per designated band
    CHECK(std::count(bodies.begin(), bodies.end(), fixtures::band(455.0, 525.0)) == 1);
    CHECK(std::count(bodies.begin(), bodies.end(), fixtures::band(477.5, 547.5)) == 1);
    CHECK(std::count(bodies.begin(), bodies.end(), fixtures::band(500.0, 570.0)) == 1);

    const auto tracks = fixtures::worked_example_tracks();
    const auto subs = split_surveys(fixtures::worked_example_surveys(), 100.0);
    const auto shapes = experiment_spec().allowed_shapes;
    CHECK(build_left_center_right(tracks, subs, shapes).configs.size() ==
          3 * build_centered(tracks, subs, shapes).configs.size());

    // When the parent width equals the band width, L, C, and R coincide and
    // uniqueness filtering keeps a single weight-4 representative.
    const Track exact{1, {Emitter{{500.0, 570.0}, 100.0}}, 0.3};
    auto degenerate = build_left_center_right({exact}, {}, {Shape{70.0}});
    const auto unique = dedup_unique_observation_sets(std::move(degenerate.configs));
    int weight4 = 0;
    for (const auto& c : unique) weight4 += c.weight == 4 ? 1 : 0;
    CHECK(weight4 == 1);
}

TEST_CASE("infeasible parents are skipped and reported") {
    const Track impossible{0, {Emitter{{500.0, 560.0}, 55.0}}, 0.3};
    const auto shapes = experiment_spec().allowed_shapes;
    const auto built = build_left_right({impossible}, {}, shapes);
    CHECK(built.configs.empty());
    REQUIRE(built.infeasible_parents.size() == 1);
    CHECK(built.infeasible_parents[0].kind == ParentRef::Kind::emitter);
}

TEST_CASE("observation sets cover every feasible parent at least twice") {
    const auto tracks = fixtures::worked_example_tracks();
    const auto subs = split_surveys(fixtures::worked_example_surveys(), 100.0);
    const auto shapes = experiment_spec().allowed_shapes;
    const auto built = build_left_right(tracks, subs, shapes);
    REQUIRE(built.infeasible_parents.empty());

    for (std::size_t i = 0; i < subs.size(); ++i) {
        int observers = 0;
        for (const Configuration& c : built.configs) {
            if (c.weight == 4 &&
                std::count(c.observed_subsurveys.begin(), c.observed_subsurveys.end(),
                           int(i)) > 0) {
                ++observers;
            }
        }
        CHECK(observers >= 2);
    }
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        int observers = 0;
        for (const Configuration& c : built.configs) {
            if (c.weight == 4 &&
                std::count(c.observed_tracks.begin(), c.observed_tracks.end(), int(i)) > 0) {
                ++observers;
            }
        }
        CHECK(observers >= 2);
    }
}

TEST_CASE("parent count formula on the worked example") {
    const auto tracks = fixtures::worked_example_tracks();
    const auto surveys = fixtures::worked_example_surveys();
    CHECK(parent_count(tracks, surveys, 100.0) == 22);  // 5 emitters + 6+4+7 pieces
    CHECK(int(split_surveys(surveys, 100.0).size()) == 17);
}

TEST_CASE("constructed bodies stay within allowed shapes and positive range") {
    const auto tracks = fixtures::worked_example_tracks();
    const auto subs = split_surveys(fixtures::worked_example_surveys(), 5.0);
    const auto shapes = experiment_spec().allowed_shapes;
    for (const Configuration& c : build_left_right(tracks, subs, shapes).configs) {
        CHECK(c.body.leftmost() > 0.0);
        CHECK(std::count(shapes.begin(), shapes.end(), shape_of(c.body)) == 1);
    }
}

TEST_CASE("uniqueness filtering keeps one configuration per observation set") {
    Configuration a{fixtures::band(100.0, 200.0), 4, {0, 1}, {3}, {}};
    Configuration b{fixtures::band(105.0, 205.0), 4, {0, 1}, {3}, {}};
    Configuration c{fixtures::band(100.0, 200.0), 1, {}, {3}, {}};
    Configuration empty{fixtures::band(900.0, 1000.0), 4, {}, {}, {}};
    const auto unique = dedup_unique_observation_sets({a, b, c, empty});
    REQUIRE(unique.size() == 2);
    CHECK(unique[0].body == a.body);  // first constructed wins
    CHECK(unique[0].weight == 4);
    CHECK(unique[1].weight == 1);
}

TEST_CASE("weight-1 duplicates survive filtering next to their originals") {
    const Track track{0, {Emitter{{500.0, 525.0}, 100.0}}, 0.3};
    const SubSurvey sub{0, 0, {505.0, 510.0}, 0.4};
    auto built = build_left_right({track}, {sub}, {Shape{70.0}});
    const auto unique = dedup_unique_observation_sets(std::move(built.configs));
    int weight1 = 0, weight4 = 0;
    for (const auto& cfg : unique) (cfg.weight == 1 ? weight1 : weight4) += 1;
    CHECK(weight4 >= 1);
    CHECK(weight1 >= 1);
}

TEST_CASE("baseline tiling covers the domain with triple-band settings") {
    const SystemSpec spec = experiment_spec();
    const auto tracks = fixtures::worked_example_tracks();
    const auto surveys = fixtures::worked_example_surveys();
    const auto base = build_baseline_configurations(tracks, surveys, spec);

    std::vector<const Configuration*> tiles;
    for (const auto& c : base.configs) {
        if (c.parent.kind == ParentRef::Kind::tile && c.weight == 4) tiles.push_back(&c);
    }
    REQUIRE(tiles.size() == 20);
    CHECK(tiles[0]->body == fixtures::bands(10000.0, 10100.0, 10200.0, 10300.0));
    CHECK(tiles[1]->body == fixtures::bands(10300.0, 10400.0, 10500.0, 10600.0));
    CHECK(tiles.back()->body == fixtures::bands(15700.0, 15800.0, 15900.0, 16000.0));

    int weight1_tiles = 0;
    for (const auto& c : base.configs) {
        if (c.parent.kind == ParentRef::Kind::tile && c.weight == 1) ++weight1_tiles;
    }
    CHECK(weight1_tiles == 20);

    // Emitters get one centered weight-4 configuration each (5 emitters).
    int emitter_configs = 0;
    for (const auto& c : base.configs) {
        if (c.parent.kind == ParentRef::Kind::emitter) {
            ++emitter_configs;
            CHECK(c.weight == 4);
        }
    }
    CHECK(emitter_configs == 5);
}

TEST_CASE("baseline sub-surveys are cut at tile band edges") {
    SystemSpec spec = experiment_spec();
    const Survey crossing{0, {10150.0, 10250.0}, 0.4};
    const auto base = build_baseline_configurations({}, {crossing}, spec);
    REQUIRE(base.subsurveys.size() == 2);
    CHECK(base.subsurveys[0].band == SingleInterval(10150.0, 10200.0));
    CHECK(base.subsurveys[1].band == SingleInterval(10200.0, 10250.0));

    // Every 100-multiple inside a survey cuts it.
    const Survey wide{1, {10050.0, 10450.0}, 0.4};
    const auto base2 = build_baseline_configurations({}, {wide}, spec);
    REQUIRE(base2.subsurveys.size() == 5);
    CHECK(base2.subsurveys[0].band == SingleInterval(10050.0, 10100.0));
    CHECK(base2.subsurveys[4].band == SingleInterval(10400.0, 10450.0));
}
