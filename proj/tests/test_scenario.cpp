#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "resourcetune/scenario.hpp"

using namespace rtune;

TEST_CASE("expected utilization of the worked example") {
    const Utilization u = expected_utilization(fixtures::worked_example_tracks(),
                                               fixtures::worked_example_surveys());
    CHECK(u.tracks == Catch::Approx(0.5));
    CHECK(u.surveys == Catch::Approx(0.425));
    CHECK(u.total == Catch::Approx(0.925));
}

TEST_CASE("expected utilization of nothing is zero") {
    const Utilization u = expected_utilization({}, {});
    CHECK(u.tracks == 0.0);
    CHECK(u.surveys == 0.0);
    CHECK(u.total == 0.0);
}

TEST_CASE("expected utilization rounds receiver counts up") {
    const Survey s{0, {1000.0, 1350.0}, 0.5};  // 350 MHz -> two settings
    const Utilization u = expected_utilization({}, {s});
    CHECK(u.surveys == Catch::Approx(0.125));
}

TEST_CASE("instance generation is reproducible") {
    ScenarioParams params;
    params.utilization = 2.0;
    params.track_proportion = 0.5;
    params.seed = 12345;
    const Instance a = generate_instance(params);
    const Instance b = generate_instance(params);
    REQUIRE(a.tracks.size() == b.tracks.size());
    for (std::size_t i = 0; i < a.tracks.size(); ++i) {
        CHECK(a.tracks[i].goal_rate == b.tracks[i].goal_rate);
        REQUIRE(a.tracks[i].emitters.size() == b.tracks[i].emitters.size());
        for (std::size_t e = 0; e < a.tracks[i].emitters.size(); ++e) {
            CHECK(a.tracks[i].emitters[e].band == b.tracks[i].emitters[e].band);
            CHECK(a.tracks[i].emitters[e].max_bandwidth == b.tracks[i].emitters[e].max_bandwidth);
        }
    }
    for (std::size_t i = 0; i < a.surveys.size(); ++i) {
        CHECK(a.surveys[i].band == b.surveys[i].band);
        CHECK(a.surveys[i].goal_rate == b.surveys[i].goal_rate);
    }
}

TEST_CASE("generated instances hit the requested utilization split") {
    for (const auto& [u, p] : std::vector<std::pair<double, double>>{
             {1.0, 0.25}, {2.0, 0.5}, {3.0, 0.75}}) {
        ScenarioParams params;
        params.utilization = u;
        params.track_proportion = p;
        params.seed = 777 + std::uint64_t(u * 10.0 + p * 100.0);
        const Instance instance = generate_instance(params);
        const Utilization actual = expected_utilization(instance.tracks, instance.surveys);
        CHECK(actual.tracks == Catch::Approx(p * u).margin(1e-9));
        CHECK(actual.surveys == Catch::Approx((1.0 - p) * u).margin(1e-9));
        CHECK(actual.total == Catch::Approx(u).margin(1e-9));
    }
}

TEST_CASE("survey bands partition the domain") {
    ScenarioParams params;
    params.seed = 99;
    const Instance instance = generate_instance(params);
    REQUIRE(instance.surveys.size() == 10);
    CHECK(instance.surveys.front().band.lo == params.domain.lo);
    CHECK(instance.surveys.back().band.hi == params.domain.hi);
    for (std::size_t i = 0; i + 1 < instance.surveys.size(); ++i) {
        CHECK(instance.surveys[i].band.hi == instance.surveys[i + 1].band.lo);
    }
}

TEST_CASE("generated emitters respect their documented ranges") {
    ScenarioParams params;
    params.utilization = 3.0;
    params.seed = 4242;
    const Instance instance = generate_instance(params);
    REQUIRE(instance.tracks.size() == 50);
    for (const Track& t : instance.tracks) {
        CHECK(t.goal_rate > 0.0);
        CHECK(t.goal_rate <= 1.0);
        REQUIRE(!t.emitters.empty());
        CHECK(t.emitters.size() <= 3);
        for (const Emitter& e : t.emitters) {
            CHECK(e.band.width() >= 1.0);
            CHECK(e.band.width() <= 50.0);
            CHECK(e.band.lo >= params.domain.lo);
            CHECK(e.band.hi <= params.domain.hi);
            CHECK(e.max_bandwidth >= e.band.width());
            CHECK(e.max_bandwidth <= 100.0);
        }
    }
    for (const Survey& s : instance.surveys) {
        CHECK(s.goal_rate > 0.0);
        CHECK(s.goal_rate <= 1.0);
    }
}

TEST_CASE("scenario parameters are validated") {
    ScenarioParams params;
    params.utilization = 0.0;
    CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);
    params.utilization = 1.0;
    params.track_proportion = 1.5;
    CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);
}
