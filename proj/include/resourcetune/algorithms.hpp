#ifndef RESOURCETUNE_ALGORITHMS_HPP
#define RESOURCETUNE_ALGORITHMS_HPP

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resourcetune/evaluate.hpp"
#include "resourcetune/plan_builder.hpp"
#include "resourcetune/preprocess.hpp"
#include "resourcetune/rates.hpp"
#include "resourcetune/rng.hpp"
#include "resourcetune/scenario.hpp"

namespace rtune {

/// Wall-clock accounting for one plan-construction cycle. The cycle total is
/// the optimization time (LP for resourcetune, zero otherwise) plus the plan
/// construction time; an overrun means the total exceeded the plan duration
/// budget. Overruns are recorded, never fatal.
struct CycleRecord {
    double lp_seconds = 0.0;
    double plan_seconds = 0.0;
    double total_seconds = 0.0;
    bool overrun = false;
};

struct AlgorithmParams {
    double split_size = 5.0;
    double discount = 0.99999;
    double budget_seconds = 2.0;
    std::uint64_t seed = 0;           // randomized algorithms only
    int ga_generation_cap = 0;        // 0 = bounded by wall clock alone
    ConstructionVariant variant = ConstructionVariant::left_right;
};

/// A plan-construction strategy driven one cycle at a time.
class Algorithm {
public:
    virtual ~Algorithm() = default;
    virtual std::string_view name() const = 0;
    virtual TuningPlan next_plan(CycleRecord& record) = 0;
};

namespace detail {

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Preprocesses once (survey splitting + configuration construction +
/// uniqueness filtering), then per cycle: demand update from the discounted
/// history, the covering LP for goal insertion rates, and queue-driven plan
/// construction.
class ResourceTuneAlgorithm final : public Algorithm {
public:
    ResourceTuneAlgorithm(const Instance& instance, const AlgorithmParams& params)
        : spec_(instance.spec), tracks_(instance.tracks),
          subsurveys_(split_surveys(instance.surveys, params.split_size)),
          history_(tracks_.size() + subsurveys_.size(), params.discount),
          budget_seconds_(params.budget_seconds) {
        BuildResult built;
        switch (params.variant) {
            case ConstructionVariant::left_right:
                built = build_left_right(tracks_, subsurveys_, spec_.allowed_shapes);
                break;
            case ConstructionVariant::centered:
                built = build_centered(tracks_, subsurveys_, spec_.allowed_shapes);
                break;
            case ConstructionVariant::left_center_right:
                built = build_left_center_right(tracks_, subsurveys_, spec_.allowed_shapes);
                break;
            case ConstructionVariant::baseline:
                throw std::invalid_argument("resourcetune: baseline construction is for baselines");
        }
        configs_ = dedup_unique_observation_sets(std::move(built.configs));
        optimizer_.emplace(configs_, int(tracks_.size()), int(subsurveys_.size()));
        goals_.reserve(tracks_.size() + subsurveys_.size());
        for (const Track& t : tracks_) goals_.push_back(t.goal_rate);
        for (const SubSurvey& s : subsurveys_) goals_.push_back(s.goal_rate);
    }

    std::string_view name() const override { return "resourcetune"; }

    const std::vector<Configuration>& configurations() const { return configs_; }
    const HistoryState& history() const { return history_; }
    const RateSolution& last_rates() const { return last_solution_; }

    TuningPlan next_plan(CycleRecord& record) override {
        const std::vector<double> cur = current_rates(history_, goals_);

        detail::StopWatch lp_watch;
        last_solution_ = optimizer_->solve(cur);
        record.lp_seconds = lp_watch.seconds();

        detail::StopWatch plan_watch;
        TuningPlan plan = construct_plan(configs_, last_solution_.rates, spec_);
        record.plan_seconds = plan_watch.seconds();

        record.total_seconds = record.lp_seconds + record.plan_seconds;
        record.overrun = record.total_seconds > budget_seconds_;
        update_history(history_, plan, tracks_, subsurveys_);
        return plan;
    }

private:
    SystemSpec spec_;
    std::vector<Track> tracks_;
    std::vector<SubSurvey> subsurveys_;
    std::vector<Configuration> configs_;
    std::optional<RateOptimizer> optimizer_;
    std::vector<double> goals_;
    HistoryState history_;
    RateSolution last_solution_;
    double budget_seconds_ = 2.0;
};

/// Time-balance greedy baseline: every task carries a balance topped up by
/// its goal rate after each plan and drained by 1/|T| per insertion that
/// observes it; each step of construction inserts the configuration with the
/// highest sum of positive balances that still has a feasible no-overlap
/// position.
class GreedyAlgorithm final : public Algorithm {
public:
    GreedyAlgorithm(const Instance& instance, const AlgorithmParams& params)
        : spec_(instance.spec), budget_seconds_(params.budget_seconds) {
        BaselineResult base = build_baseline_configurations(instance.tracks, instance.surveys,
                                                            instance.spec);
        configs_ = std::move(base.configs);
        subsurveys_ = std::move(base.subsurveys);
        tracks_ = instance.tracks;
        for (const Track& t : tracks_) {
            goals_.push_back(t.goal_rate);
        }
        for (const SubSurvey& s : subsurveys_) goals_.push_back(s.goal_rate);
        balances_ = goals_;
    }

    std::string_view name() const override { return "greedy"; }

    const std::vector<double>& balances() const { return balances_; }
    const std::vector<Configuration>& configurations() const { return configs_; }

    TuningPlan next_plan(CycleRecord& record) override {
        detail::StopWatch watch;
        PlanBuilder builder(spec_);
        while (true) {
            int best = -1;
            double best_priority = 0.0;
            std::vector<Position> best_positions;
            for (std::size_t i = 0; i < configs_.size(); ++i) {
                const double priority = config_priority(configs_[i]);
                if (priority <= 0.0 || priority <= best_priority) continue;
                std::vector<Position> positions = builder.feasible_positions(configs_[i], false);
                if (positions.empty()) continue;
                best = int(i);
                best_priority = priority;
                best_positions = std::move(positions);
            }
            if (best < 0) break;
            builder.insert(configs_[best], best,
                           select_position(best_positions, builder.plan()));
            drain_balances(configs_[best]);
        }
        for (std::size_t i = 0; i < balances_.size(); ++i) balances_[i] += goals_[i];
        record.plan_seconds = watch.seconds();
        record.total_seconds = record.plan_seconds;
        record.overrun = record.total_seconds > budget_seconds_;
        return builder.plan();
    }

private:
    double config_priority(const Configuration& c) const {
        double priority = 0.0;
        for (int t : c.observed_tracks) priority += std::max(0.0, balances_[t]);
        for (int s : c.observed_subsurveys) {
            priority += std::max(0.0, balances_[tracks_.size() + s]);
        }
        return priority;
    }

    void drain_balances(const Configuration& c) {
        const double step = 1.0 / double(spec_.steps_per_plan);
        for (int t : c.observed_tracks) balances_[t] -= step;
        for (int s : c.observed_subsurveys) balances_[tracks_.size() + s] -= step;
    }

    SystemSpec spec_;
    std::vector<Track> tracks_;
    std::vector<SubSurvey> subsurveys_;
    std::vector<Configuration> configs_;
    std::vector<double> goals_;
    std::vector<double> balances_;
    double budget_seconds_ = 2.0;
};

/// Genetic-algorithm baseline. Each receiver cell of the plan is one gene
/// (idle or a configuration index); fitness is the objective over all
/// previously emitted plans plus the candidate, with the emitted plans'
/// contributions cached. Each cycle runs two phases on half the budget
/// each: phase one searches weight-4 configurations only, phase two seeds
/// half its population from phase one and searches all configurations.
class GaAlgorithm final : public Algorithm {
public:
    GaAlgorithm(const Instance& instance, const AlgorithmParams& params)
        : spec_(instance.spec), budget_seconds_(params.budget_seconds),
          generation_cap_(params.ga_generation_cap),
          rng_(rng::substream(params.seed, "ga")),
          archive_(instance.tracks, instance.surveys, instance.spec.steps_per_plan) {
        BaselineResult base = build_baseline_configurations(instance.tracks, instance.surveys,
                                                            instance.spec);
        configs_ = std::move(base.configs);
        for (std::size_t i = 0; i < configs_.size(); ++i) {
            if (configs_[i].weight == 4) weight4_gene_values_.push_back(int(i));
            all_gene_values_.push_back(int(i));
        }
        gene_count_ = spec_.node_count * spec_.receivers_per_node * spec_.steps_per_plan;
    }

    std::string_view name() const override { return "ga"; }

    int gene_count() const { return gene_count_; }
    const std::vector<Configuration>& configurations() const { return configs_; }
    const std::vector<double>& last_phase_best_history() const { return best_history_; }

    /// Plan encoded by a chromosome: each gene fills one receiver cell.
    TuningPlan decode(const std::vector<int>& genes) const {
        TuningPlan plan(spec_);
        int g = 0;
        for (int n = 0; n < spec_.node_count; ++n) {
            for (int r = 0; r < spec_.receivers_per_node; ++r) {
                for (int t = 0; t < spec_.steps_per_plan; ++t, ++g) {
                    if (genes[g] >= 0) {
                        plan.set_cell(n, r, t, Cell{configs_[genes[g]].body, genes[g]});
                    }
                }
            }
        }
        return plan;
    }

    double fitness(const std::vector<int>& genes) const {
        return archive_.objective_with(decode(genes));
    }

    TuningPlan next_plan(CycleRecord& record) override {
        detail::StopWatch watch;
        const double phase_budget = budget_seconds_ / 2.0;
        std::vector<Individual> phase1 =
            evolve(weight4_gene_values_, {}, phase_budget);
        std::vector<Individual> phase2 =
            evolve(all_gene_values_, phase1, phase_budget);

        const Individual& best = phase2.front();
        TuningPlan plan = decode(best.genes);
        archive_.add_plan(plan);
        record.plan_seconds = watch.seconds();
        record.total_seconds = record.plan_seconds;
        record.overrun = record.total_seconds > budget_seconds_;
        return plan;
    }

private:
    struct Individual {
        std::vector<int> genes;
        double fitness = 0.0;
    };

    static constexpr int kPopulation = 50;
    static constexpr int kElite = 2;
    static constexpr double kCrossoverRate = 0.9;

    std::vector<int> random_genes(const std::vector<int>& alphabet) {
        std::vector<int> genes(gene_count_);
        for (int& g : genes) {
            // idle is one extra symbol alongside the configuration indices
            const std::uint64_t pick = rng_.uniform_int(0, alphabet.size());
            g = pick == alphabet.size() ? -1 : alphabet[pick];
        }
        return genes;
    }

    // Sorted population, best (lowest objective) first.
    std::vector<Individual> evolve(const std::vector<int>& alphabet,
                                   const std::vector<Individual>& seeds,
                                   double budget_seconds) {
        detail::StopWatch watch;
        std::vector<Individual> population;
        population.reserve(kPopulation);
        const std::size_t seed_slots = kPopulation / 2;
        for (std::size_t i = 0; i < seeds.size() && population.size() < seed_slots; ++i) {
            population.push_back(seeds[i]);
        }
        while (population.size() < std::size_t(kPopulation)) {
            Individual ind;
            ind.genes = random_genes(alphabet);
            population.push_back(std::move(ind));
        }
        for (Individual& ind : population) ind.fitness = fitness(ind.genes);
        sort_population(population);

        best_history_.clear();
        best_history_.push_back(population.front().fitness);
        const double mutation_rate = 1.0 / double(gene_count_);
        int generation = 0;
        double last_generation_seconds = 0.0;
        while (generation_cap_ == 0 || generation < generation_cap_) {
            // Stop while the next generation still fits in the budget.
            if (watch.seconds() + last_generation_seconds >= budget_seconds) break;
            detail::StopWatch generation_watch;
            std::vector<Individual> next;
            next.reserve(kPopulation);
            for (int e = 0; e < kElite; ++e) next.push_back(population[e]);
            while (int(next.size()) < kPopulation) {
                const Individual& a = tournament(population);
                const Individual& b = tournament(population);
                Individual child;
                child.genes.resize(gene_count_);
                const bool cross = rng_.bernoulli(kCrossoverRate);
                for (int g = 0; g < gene_count_; ++g) {
                    const Individual& source = cross && rng_.bernoulli(0.5) ? b : a;
                    child.genes[g] = source.genes[g];
                    if (rng_.bernoulli(mutation_rate)) {
                        const std::uint64_t pick = rng_.uniform_int(0, alphabet.size());
                        child.genes[g] = pick == alphabet.size() ? -1 : alphabet[pick];
                    }
                }
                child.fitness = fitness(child.genes);
                next.push_back(std::move(child));
            }
            sort_population(next);
            population = std::move(next);
            best_history_.push_back(population.front().fitness);
            ++generation;
            last_generation_seconds = generation_watch.seconds();
        }
        return population;
    }

    const Individual& tournament(const std::vector<Individual>& population) {
        const std::uint64_t a = rng_.uniform_int(0, population.size() - 1);
        const std::uint64_t b = rng_.uniform_int(0, population.size() - 1);
        return population[a].fitness <= population[b].fitness ? population[a] : population[b];
    }

    static void sort_population(std::vector<Individual>& population) {
        std::stable_sort(population.begin(), population.end(),
                         [](const Individual& x, const Individual& y) {
                             return x.fitness < y.fitness;
                         });
    }

    SystemSpec spec_;
    std::vector<Configuration> configs_;
    std::vector<int> weight4_gene_values_;
    std::vector<int> all_gene_values_;
    int gene_count_ = 0;
    double budget_seconds_ = 2.0;
    int generation_cap_ = 0;
    rng::SplitMix64 rng_;
    SequenceEvaluator archive_;
    std::vector<double> best_history_;
};

inline std::unique_ptr<Algorithm> make_algorithm(std::string_view id, const Instance& instance,
                                                 const AlgorithmParams& params) {
    if (id == "resourcetune") return std::make_unique<ResourceTuneAlgorithm>(instance, params);
    if (id == "greedy") return std::make_unique<GreedyAlgorithm>(instance, params);
    if (id == "ga") return std::make_unique<GaAlgorithm>(instance, params);
    throw std::invalid_argument("unknown algorithm: " + std::string(id));
}

}  // namespace rtune

#endif  // RESOURCETUNE_ALGORITHMS_HPP
