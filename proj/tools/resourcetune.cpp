// Command-line harness: scenario generation, algorithm runs, objective
// evaluation of stored plans, and multi-algorithm comparisons.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resourcetune/harness.hpp"
#include "resourcetune/io.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_generate(double utilization, double track_proportion, int count, std::uint64_t seed,
                 const std::string& out_dir) {
    if (count < 1) throw std::invalid_argument("--count must be >= 1");
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        rtune::ScenarioParams params;
        params.utilization = utilization;
        params.track_proportion = track_proportion;
        params.seed = rtune::rng::substream(seed, "instance", std::uint64_t(i)).next_u64();
        rtune::Instance instance = rtune::generate_instance(params);
        char name[128];
        std::snprintf(name, sizeof(name), "inst_u%.2f_p%.2f_s%llu_%03d.json", utilization,
                      track_proportion, static_cast<unsigned long long>(seed), i);
        const fs::path path = fs::path(out_dir) / name;
        rtune::write_instance(instance, path);
        std::cout << path.string() << "\n";
    }
    return 0;
}

int cmd_run(const std::string& instance_path, const std::string& algorithm, int plans,
            const rtune::AlgorithmParams& params, const std::string& out_path) {
    const rtune::Instance instance = rtune::read_instance(instance_path);
    const rtune::RunRecord record = rtune::run(instance, algorithm, plans, params);
    const rtune::Json j = rtune::to_json(record);
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        rtune::write_text_file(out_path, j.dump(2) + "\n");
        std::cout << out_path << "\n";
    }
    int overruns = 0;
    for (const auto& c : record.cycles) overruns += c.overrun ? 1 : 0;
    std::cerr << algorithm << " on " << record.instance_id << ": objective "
              << rtune::format_number(record.objective) << ", " << overruns
              << " budget overruns in " << plans << " cycles\n";
    return 0;
}

int cmd_eval(const std::string& instance_path, const std::string& plans_path) {
    const rtune::Instance instance = rtune::read_instance(instance_path);
    const rtune::Json j = rtune::Json::parse(rtune::read_text_file(plans_path));
    std::vector<rtune::TuningPlan> plans;
    const rtune::Json& plan_array = j.contains("plans") ? j.at("plans") : j;
    for (const auto& jp : plan_array) plans.push_back(rtune::tuning_plan_from_json(jp));
    const rtune::EvaluationReport report =
        rtune::evaluate(plans, instance.tracks, instance.surveys);

    rtune::Json out{{"objective", report.total},
                    {"plan_count", report.plan_count},
                    {"per_track", rtune::Json::object()},
                    {"per_survey", rtune::Json::object()}};
    for (const auto& [id, v] : report.per_track) out["per_track"][std::to_string(id)] = v;
    for (const auto& [id, v] : report.per_survey) out["per_survey"][std::to_string(id)] = v;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& instances_dir, const std::vector<std::string>& algorithms,
                int plans, const rtune::AlgorithmParams& params, const std::string& out_dir,
                bool plots) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(instances_dir)) {
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::invalid_argument("no instance files in " + instances_dir);

    std::vector<rtune::Instance> instances;
    instances.reserve(paths.size());
    for (const fs::path& p : paths) instances.push_back(rtune::read_instance(p));

    const rtune::ComparisonTable table = rtune::compare(instances, algorithms, plans, params);
    for (const fs::path& f : rtune::emit_report(table, out_dir, plots)) {
        std::cout << f.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Receiver tuning-plan construction harness"};
    app.require_subcommand(1);

    double utilization = 1.0;
    double track_proportion = 0.5;
    int count = 1;
    std::uint64_t seed = 1;
    std::string out;

    auto* generate = app.add_subcommand("generate", "Generate random problem instances");
    generate->add_option("--utilization", utilization, "Expected resource utilization U");
    generate->add_option("--track-proportion", track_proportion, "Track share p of U");
    generate->add_option("--count", count, "Number of instances");
    generate->add_option("--seed", seed, "Master seed");
    generate->add_option("--out", out, "Output directory")->required();

    std::string instance_path;
    std::string algorithm = "resourcetune";
    int plans = 100;
    rtune::AlgorithmParams params;
    std::string plans_file;
    std::vector<std::string> algorithms{"resourcetune", "greedy", "ga"};
    std::string instances_dir;
    bool plots = false;

    auto add_algorithm_options = [&params](CLI::App* cmd) {
        cmd->add_option("--split-size", params.split_size, "Sub-survey split size k");
        cmd->add_option("--discount", params.discount, "History discount factor");
        cmd->add_option("--budget-seconds", params.budget_seconds, "Cycle time budget");
        cmd->add_option("--ga-generations", params.ga_generation_cap,
                        "Cap GA generations per phase (0 = wall clock only)");
    };

    auto* run_cmd = app.add_subcommand("run", "Run one algorithm on one instance");
    run_cmd->add_option("--instance", instance_path, "Instance file")->required();
    run_cmd->add_option("--algorithm", algorithm, "resourcetune|greedy|ga")
        ->check(CLI::IsMember({"resourcetune", "greedy", "ga"}));
    run_cmd->add_option("--plans", plans, "Consecutive tuning plans to construct");
    add_algorithm_options(run_cmd);
    run_cmd->add_option("--out", out, "Run record output file (stdout when omitted)");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate stored plans against an instance");
    eval_cmd->add_option("--instance", instance_path, "Instance file")->required();
    eval_cmd->add_option("--plans-file", plans_file, "Run record or plan array JSON")->required();

    auto* compare_cmd = app.add_subcommand("compare", "Compare algorithms across instances");
    compare_cmd->add_option("--instances-dir", instances_dir, "Directory of instance files")
        ->required();
    compare_cmd->add_option("--algorithms", algorithms, "Algorithms to compare")->delimiter(',');
    compare_cmd->add_option("--plans", plans, "Consecutive tuning plans per run");
    add_algorithm_options(compare_cmd);
    compare_cmd->add_option("--out", out, "Report output directory")->required();
    compare_cmd->add_flag("--plots", plots, "Also write one SVG chart per scenario");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(utilization, track_proportion, count, seed, out);
        }
        if (run_cmd->parsed()) {
            return cmd_run(instance_path, algorithm, plans, params, out);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(instance_path, plans_file);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(instances_dir, algorithms, plans, params, out, plots);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
