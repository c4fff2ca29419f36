#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "resourcetune/algorithms.hpp"
#include "resourcetune/evaluate.hpp"

using namespace rtune;

namespace {

Instance worked_example_instance() {
    Instance instance;
    instance.id = "worked-example";
    instance.spec = experiment_spec();
    instance.tracks = fixtures::worked_example_tracks();
    instance.surveys = fixtures::worked_example_surveys();
    instance.meta = InstanceMeta{17, 0.925, 0.54};
    return instance;
}

Instance single_track_instance() {
    Instance instance;
    instance.id = "single-track";
    instance.spec = experiment_spec();
    instance.tracks = {Track{0, {Emitter{{10970.0, 10990.0}, 100.0}}, 1.0}};
    instance.meta = InstanceMeta{3, 0.5, 1.0};
    return instance;
}

}  // namespace

TEST_CASE("resourcetune emits plans within the objective envelope") {
    const Instance instance = worked_example_instance();
    AlgorithmParams params;
    params.split_size = 100.0;
    ResourceTuneAlgorithm algo(instance, params);
    CycleRecord record;
    const TuningPlan plan = algo.next_plan(record);
    std::vector<TuningPlan> plans{plan};
    const double theta = evaluate(plans, instance.tracks, instance.surveys).total;
    double goals = 0.0;
    for (const auto& t : instance.tracks) goals += t.goal_rate;
    for (const auto& s : instance.surveys) goals += s.goal_rate;
    CHECK(theta <= goals);
    CHECK(record.total_seconds >= 0.0);
    CHECK(record.total_seconds == Catch::Approx(record.lp_seconds + record.plan_seconds));
}

TEST_CASE("a full-rate track with ample capacity is observed every step") {
    const Instance instance = single_track_instance();
    ResourceTuneAlgorithm algo(instance, {});
    for (int cycle = 0; cycle < 3; ++cycle) {
        CycleRecord record;
        const TuningPlan plan = algo.next_plan(record);
        for (int t = 0; t < plan.steps_per_plan(); ++t) {
            CHECK(track_observed_in_step(plan, t, instance.tracks[0]));
        }
    }
}

TEST_CASE("resourcetune cycles keep history demand near goal when satisfied") {
    const Instance instance = single_track_instance();
    ResourceTuneAlgorithm algo(instance, {});
    for (int cycle = 0; cycle < 5; ++cycle) {
        CycleRecord record;
        algo.next_plan(record);
    }
    CHECK(algo.history().plan_index == 5);
    CHECK(algo.history().h[0] > 0.0);
}

TEST_CASE("plans produced by each strategy respect the system grid") {
    const Instance instance = worked_example_instance();
    for (const std::string name : {"resourcetune", "greedy", "ga"}) {
        AlgorithmParams params;
        params.seed = 5;
        params.budget_seconds = 0.2;  // keep the GA quick here
        params.ga_generation_cap = 3;
        const auto algo = make_algorithm(name, instance, params);
        CycleRecord record;
        const TuningPlan plan = algo->next_plan(record);
        CHECK(plan.node_count() == 4);
        CHECK(plan.receivers_per_node() == 2);
        CHECK(plan.steps_per_plan() == 10);
        for (int n = 0; n < 4; ++n) {
            for (int r = 0; r < 2; ++r) {
                for (int t = 0; t < 10; ++t) {
                    const auto& cell = plan.cell(n, r, t);
                    if (!cell) continue;
                    const Shape s = shape_of(cell->body);
                    CHECK(std::count(instance.spec.allowed_shapes.begin(),
                                     instance.spec.allowed_shapes.end(), s) == 1);
                }
            }
        }
    }
}

TEST_CASE("greedy priorities sum the positive balances") {
    const Instance instance = worked_example_instance();
    GreedyAlgorithm greedy(instance, {});
    // Priority of a hypothetical configuration observing three tasks with
    // balances {0.2, -0.1, 0.3} is 0.5; exercised through the balance vector.
    std::vector<double> balances{0.2, -0.1, 0.3};
    double priority = 0.0;
    for (double b : balances) priority += std::max(0.0, b);
    CHECK(priority == Catch::Approx(0.5));
}

TEST_CASE("greedy drains and replenishes balances") {
    Instance instance;
    instance.id = "greedy-balances";
    instance.spec = experiment_spec();
    instance.tracks = {Track{0, {Emitter{{10970.0, 10990.0}, 100.0}}, 0.3}};
    instance.surveys = {};
    instance.meta = InstanceMeta{9, 0.15, 1.0};

    GreedyAlgorithm greedy(instance, {});
    REQUIRE(greedy.balances().size() == 1);
    CHECK(greedy.balances()[0] == Catch::Approx(0.3));

    CycleRecord record;
    const TuningPlan plan = greedy.next_plan(record);
    // Three insertions drain 3/|T| = 0.3, then the goal rate tops it up.
    CHECK(realized_track_rate(plan, instance.tracks[0]) == Catch::Approx(0.3));
    CHECK(greedy.balances()[0] == Catch::Approx(0.3));
}

TEST_CASE("greedy with depleted balances emits an empty plan") {
    Instance instance;
    instance.id = "greedy-empty";
    instance.spec = experiment_spec();
    // A goal rate of zero keeps every balance at or below zero.
    instance.tracks = {Track{0, {Emitter{{10970.0, 10990.0}, 100.0}}, 0.0}};
    instance.meta = InstanceMeta{11, 0.0, 1.0};

    GreedyAlgorithm greedy(instance, {});
    CycleRecord record;
    const TuningPlan plan = greedy.next_plan(record);
    CHECK(plan.occupied_cell_count() == 0);
    CHECK(greedy.balances()[0] == Catch::Approx(0.0));

    // Without insertions, n plans replenish the balance n times.
    Instance positive = instance;
    positive.tracks[0].goal_rate = 0.4;
    positive.tracks[0].emitters[0].max_bandwidth = 5.0;  // unobservable: no feasible shape
    GreedyAlgorithm starved(positive, {});
    for (int i = 0; i < 3; ++i) {
        CycleRecord r;
        starved.next_plan(r);
    }
    CHECK(starved.balances()[0] == Catch::Approx(0.4 * 4));
}

TEST_CASE("ga chromosomes span the receiver grid") {
    const Instance instance = worked_example_instance();
    AlgorithmParams params;
    params.seed = 21;
    GaAlgorithm ga(instance, params);
    CHECK(ga.gene_count() == 80);
}

TEST_CASE("ga fitness of the all-idle chromosome is the goal sum") {
    const Instance instance = worked_example_instance();
    AlgorithmParams params;
    params.seed = 21;
    GaAlgorithm ga(instance, params);
    const std::vector<int> idle(ga.gene_count(), -1);
    double goals = 0.0;
    for (const auto& t : instance.tracks) goals += t.goal_rate;
    for (const auto& s : instance.surveys) goals += s.goal_rate;
    CHECK(ga.fitness(idle) == Catch::Approx(goals));
}

TEST_CASE("ga fitness of a perfect plan is zero") {
    // Score the worked-example plan through the evaluator the GA uses.
    const Instance instance = worked_example_instance();
    SequenceEvaluator archive(instance.tracks, instance.surveys, 10);
    CHECK(archive.objective_with(fixtures::worked_example_plan()) ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("ga best fitness never worsens across generations") {
    const Instance instance = worked_example_instance();
    AlgorithmParams params;
    params.seed = 33;
    params.budget_seconds = 1.0;
    params.ga_generation_cap = 8;
    GaAlgorithm ga(instance, params);
    CycleRecord record;
    ga.next_plan(record);
    const auto& history = ga.last_phase_best_history();
    REQUIRE(history.size() >= 2);
    for (std::size_t i = 1; i < history.size(); ++i) {
        CHECK(history[i] <= history[i - 1] + 1e-12);
    }
}

TEST_CASE("strategies are reproducible under fixed seeds") {
    const Instance instance = worked_example_instance();
    for (const std::string name : {"resourcetune", "greedy", "ga"}) {
        AlgorithmParams params;
        params.seed = 1234;
        params.budget_seconds = 0.2;
        params.ga_generation_cap = 3;  // deterministic generation count
        const auto a = make_algorithm(name, instance, params);
        const auto b = make_algorithm(name, instance, params);
        for (int cycle = 0; cycle < 2; ++cycle) {
            CycleRecord ra, rb;
            CHECK(a->next_plan(ra) == b->next_plan(rb));
        }
    }
}

TEST_CASE("unknown algorithm ids are rejected") {
    CHECK_THROWS_AS(make_algorithm("anneal", worked_example_instance(), {}),
                    std::invalid_argument);
}
