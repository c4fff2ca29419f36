#ifndef RESOURCETUNE_HARNESS_HPP
#define RESOURCETUNE_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "resourcetune/algorithms.hpp"
#include "resourcetune/evaluate.hpp"
#include "resourcetune/io.hpp"
#include "resourcetune/scenario.hpp"

namespace rtune {

inline std::uint64_t derive_algorithm_seed(std::uint64_t instance_seed, std::string_view name) {
    return rng::substream(instance_seed, name).next_u64();
}

/// Drives one algorithm for `plan_count` cycles on the instance and scores
/// the emitted plan sequence.
inline RunRecord run(const Instance& instance, std::string_view algorithm, int plan_count,
                     AlgorithmParams params = {}) {
    if (plan_count <= 0) throw std::invalid_argument("run: plan_count must be >= 1");
    if (params.seed == 0) {
        params.seed = derive_algorithm_seed(instance.meta.seed, algorithm);
    }
    RunRecord record;
    record.instance_id = instance.id;
    record.algorithm = std::string(algorithm);
    record.scenario_u = instance.meta.utilization;
    record.scenario_p = instance.meta.track_proportion;
    record.instance_seed = instance.meta.seed;
    record.algorithm_seed = params.seed;

    const auto algo = make_algorithm(algorithm, instance, params);
    record.plans.reserve(plan_count);
    for (int j = 0; j < plan_count; ++j) {
        CycleRecord cycle;
        record.plans.push_back(algo->next_plan(cycle));
        record.cycles.push_back(cycle);
    }
    record.plans_emitted = plan_count;
    record.objective = evaluate(record.plans, instance.tracks, instance.surveys).total;
    return record;
}

/// Linear-interpolation quantile (type 7). Values may contain +infinity.
inline double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile: no values");
    std::sort(values.begin(), values.end());
    const double h = (double(values.size()) - 1.0) * p;
    const std::size_t lo = std::size_t(std::floor(h));
    const double frac = h - double(lo);
    if (frac == 0.0 || lo + 1 >= values.size()) return values[lo];
    if (std::isinf(values[lo]) || (frac > 0.0 && std::isinf(values[lo + 1]))) {
        return std::numeric_limits<double>::infinity();
    }
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

struct AlgorithmSummary {
    std::string algorithm;
    double mean = 0.0;
    double sd = 0.0;
    int wins = 0;
    double normalized_q1 = 0.0;  // quartiles of the normalized objective
    double normalized_q2 = 0.0;
    double normalized_q3 = 0.0;
};

struct ScenarioSummary {
    double utilization = 0.0;
    double track_proportion = 0.0;
    int instances = 0;
    int ties = 0;  // instances where several algorithms shared the best objective
    std::vector<AlgorithmSummary> algorithms;
};

struct ComparisonTable {
    int plan_count = 0;
    std::vector<ScenarioSummary> scenarios;
    std::vector<RunRecord> runs;
};

/// Runs every algorithm on every instance and aggregates per scenario:
/// mean and SD of the objective, win counts (ties go to every minimal
/// algorithm and are flagged), and quartiles of the objective normalized by
/// the per-instance best. When the best objective is zero, algorithms also
/// at zero normalize to 1 and the rest to infinity.
inline ComparisonTable compare(const std::vector<Instance>& instances,
                               const std::vector<std::string>& algorithms, int plan_count,
                               const AlgorithmParams& params = {}) {
    if (instances.empty()) throw std::invalid_argument("compare: need at least one instance");
    if (algorithms.size() < 2) throw std::invalid_argument("compare: need at least two algorithms");

    ComparisonTable table;
    table.plan_count = plan_count;

    std::map<std::pair<double, double>, std::vector<std::size_t>> by_scenario;
    for (const Instance& instance : instances) {
        const std::size_t first_run = table.runs.size();
        for (const std::string& algorithm : algorithms) {
            AlgorithmParams run_params = params;
            run_params.seed = 0;  // derive per (instance, algorithm)
            table.runs.push_back(run(instance, algorithm, plan_count, run_params));
        }
        by_scenario[{instance.meta.utilization, instance.meta.track_proportion}]
            .push_back(first_run);
    }

    for (const auto& [key, first_runs] : by_scenario) {
        ScenarioSummary scenario;
        scenario.utilization = key.first;
        scenario.track_proportion = key.second;
        scenario.instances = int(first_runs.size());

        std::vector<std::vector<double>> objectives(algorithms.size());
        std::vector<std::vector<double>> normalized(algorithms.size());
        std::vector<int> wins(algorithms.size(), 0);
        for (std::size_t base : first_runs) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < algorithms.size(); ++a) {
                best = std::min(best, table.runs[base + a].objective);
            }
            int winners = 0;
            for (std::size_t a = 0; a < algorithms.size(); ++a) {
                const double obj = table.runs[base + a].objective;
                objectives[a].push_back(obj);
                if (obj == best) {
                    ++wins[a];
                    ++winners;
                }
                if (best > 0.0) {
                    normalized[a].push_back(obj / best);
                } else {
                    normalized[a].push_back(obj == 0.0
                                                ? 1.0
                                                : std::numeric_limits<double>::infinity());
                }
            }
            if (winners > 1) ++scenario.ties;
        }

        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            AlgorithmSummary summary;
            summary.algorithm = algorithms[a];
            const auto& vals = objectives[a];
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= double(vals.size());
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            summary.mean = mean;
            summary.sd = vals.size() > 1 ? std::sqrt(var / double(vals.size() - 1)) : 0.0;
            summary.wins = wins[a];
            summary.normalized_q1 = quantile_type7(normalized[a], 0.25);
            summary.normalized_q2 = quantile_type7(normalized[a], 0.50);
            summary.normalized_q3 = quantile_type7(normalized[a], 0.75);
            scenario.algorithms.push_back(std::move(summary));
        }
        table.scenarios.push_back(std::move(scenario));
    }
    return table;
}

inline std::string runs_csv(const std::vector<RunRecord>& records) {
    std::string csv =
        "instance_id,algorithm,scenario_u,scenario_p,plans,objective,"
        "lp_time_mean,plan_time_mean,total_time_mean,total_time_max,seed\n";
    for (const RunRecord& r : records) {
        double lp = 0.0, plan = 0.0, total = 0.0, total_max = 0.0;
        for (const CycleRecord& c : r.cycles) {
            lp += c.lp_seconds;
            plan += c.plan_seconds;
            total += c.total_seconds;
            total_max = std::max(total_max, c.total_seconds);
        }
        const double n = r.cycles.empty() ? 1.0 : double(r.cycles.size());
        csv += r.instance_id + "," + r.algorithm + "," + format_number(r.scenario_u) + "," +
               format_number(r.scenario_p) + "," + std::to_string(r.plans_emitted) + "," +
               format_number(r.objective) + "," + format_number(lp / n) + "," +
               format_number(plan / n) + "," + format_number(total / n) + "," +
               format_number(total_max) + "," + std::to_string(r.instance_seed) + "\n";
    }
    return csv;
}

inline Json normalized_to_json(double v) {
    if (std::isinf(v)) return Json("inf");
    return Json(v);
}

inline Json to_json(const ComparisonTable& table) {
    Json scenarios = Json::array();
    for (const ScenarioSummary& s : table.scenarios) {
        Json algorithms = Json::array();
        for (const AlgorithmSummary& a : s.algorithms) {
            algorithms.push_back(Json{{"algorithm", a.algorithm},
                                      {"mean", a.mean},
                                      {"sd", a.sd},
                                      {"wins", a.wins},
                                      {"normalized_q1", normalized_to_json(a.normalized_q1)},
                                      {"normalized_q2", normalized_to_json(a.normalized_q2)},
                                      {"normalized_q3", normalized_to_json(a.normalized_q3)}});
        }
        scenarios.push_back(Json{{"utilization", s.utilization},
                                 {"track_proportion", s.track_proportion},
                                 {"instances", s.instances},
                                 {"ties", s.ties},
                                 {"algorithms", std::move(algorithms)}});
    }
    return Json{{"plans", table.plan_count}, {"scenarios", std::move(scenarios)}};
}

/// Box-and-whisker chart of per-instance objectives per algorithm, one file
/// per scenario. Plain SVG with legible defaults.
inline std::string scenario_plot_svg(const ComparisonTable& table,
                                     const ScenarioSummary& scenario) {
    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const AlgorithmSummary& a : scenario.algorithms) {
        std::vector<double> values;
        for (const RunRecord& r : table.runs) {
            if (r.algorithm == a.algorithm && r.scenario_u == scenario.utilization &&
                r.scenario_p == scenario.track_proportion) {
                values.push_back(r.objective);
            }
        }
        std::sort(values.begin(), values.end());
        series.emplace_back(a.algorithm, std::move(values));
    }

    double vmax = 0.0;
    for (const auto& [name, values] : series) {
        if (!values.empty()) vmax = std::max(vmax, values.back());
    }
    if (vmax <= 0.0) vmax = 1.0;

    const double width = 160.0 * double(series.size()) + 80.0;
    const double height = 320.0;
    const double plot_top = 30.0, plot_bottom = height - 50.0;
    auto y_of = [&](double v) {
        return plot_bottom - (v / vmax) * (plot_bottom - plot_top);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      format_number(width) + "\" height=\"" + format_number(height) + "\">\n";
    svg += "<text x=\"10\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">objective, U=" +
           format_number(scenario.utilization) + " p=" +
           format_number(scenario.track_proportion) + "</text>\n";
    svg += "<line x1=\"50\" y1=\"" + format_number(plot_top) + "\" x2=\"50\" y2=\"" +
           format_number(plot_bottom) + "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = vmax * double(tick) / 4.0;
        svg += "<text x=\"6\" y=\"" + format_number(y_of(v) + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" + format_number(v) +
               "</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& values = series[i].second;
        if (values.empty()) continue;
        const double cx = 130.0 + 160.0 * double(i);
        const double q1 = quantile_type7(values, 0.25);
        const double q2 = quantile_type7(values, 0.50);
        const double q3 = quantile_type7(values, 0.75);
        const double lo = values.front(), hi = values.back();
        svg += "<line x1=\"" + format_number(cx) + "\" y1=\"" + format_number(y_of(lo)) +
               "\" x2=\"" + format_number(cx) + "\" y2=\"" + format_number(y_of(hi)) +
               "\" stroke=\"black\"/>\n";
        svg += "<rect x=\"" + format_number(cx - 35.0) + "\" y=\"" + format_number(y_of(q3)) +
               "\" width=\"70\" height=\"" + format_number(y_of(q1) - y_of(q3)) +
               "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + format_number(cx - 35.0) + "\" y1=\"" + format_number(y_of(q2)) +
               "\" x2=\"" + format_number(cx + 35.0) + "\" y2=\"" + format_number(y_of(q2)) +
               "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + format_number(cx - 35.0) + "\" y=\"" +
               format_number(height - 25.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + series[i].first +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Writes results.csv and summary.json under `dir`; with `plots`, one SVG
/// per scenario as well. I/O failures surface with the file path.
inline std::vector<std::filesystem::path> emit_report(const ComparisonTable& table,
                                                      const std::filesystem::path& dir,
                                                      bool plots = false) {
    if (table.runs.empty()) throw std::invalid_argument("emit_report: no run records");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;

    const auto csv_path = dir / "results.csv";
    write_text_file(csv_path, runs_csv(table.runs));
    files.push_back(csv_path);

    const auto summary_path = dir / "summary.json";
    write_text_file(summary_path, to_json(table).dump(2) + "\n");
    files.push_back(summary_path);

    if (plots) {
        for (const ScenarioSummary& s : table.scenarios) {
            const auto plot_path =
                dir / ("plot_u" + format_number(s.utilization) + "_p" +
                       format_number(s.track_proportion) + ".svg");
            write_text_file(plot_path, scenario_plot_svg(table, s));
            files.push_back(plot_path);
        }
    }
    return files;
}

}  // namespace rtune

#endif  // RESOURCETUNE_HARNESS_HPP
