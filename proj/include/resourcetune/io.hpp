#ifndef RESOURCETUNE_IO_HPP
#define RESOURCETUNE_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "resourcetune/algorithms.hpp"
#include "resourcetune/model.hpp"
#include "resourcetune/scenario.hpp"

namespace rtune {

using Json = nlohmann::ordered_json;

inline Json to_json(const SystemSpec& spec) {
    Json shapes = Json::array();
    for (const Shape& s : spec.allowed_shapes) shapes.push_back(s.entries);
    return Json{{"node_count", spec.node_count},
                {"receivers_per_node", spec.receivers_per_node},
                {"steps_per_plan", spec.steps_per_plan},
                {"allowed_shapes", std::move(shapes)},
                {"frequency_domain", {{"lo", spec.frequency_domain.lo},
                                      {"hi", spec.frequency_domain.hi}}},
                {"plan_duration_seconds", spec.plan_duration_seconds}};
}

inline SystemSpec system_spec_from_json(const Json& j) {
    SystemSpec spec;
    spec.node_count = j.at("node_count").get<int>();
    spec.receivers_per_node = j.at("receivers_per_node").get<int>();
    spec.steps_per_plan = j.at("steps_per_plan").get<int>();
    spec.allowed_shapes.clear();
    for (const auto& entry : j.at("allowed_shapes")) {
        spec.allowed_shapes.push_back(Shape(entry.get<std::vector<double>>()));
    }
    spec.frequency_domain = SingleInterval(j.at("frequency_domain").at("lo").get<double>(),
                                           j.at("frequency_domain").at("hi").get<double>());
    spec.plan_duration_seconds = j.at("plan_duration_seconds").get<double>();
    return spec;
}

inline Json to_json(const Instance& instance) {
    Json tracks = Json::array();
    for (const Track& t : instance.tracks) {
        Json emitters = Json::array();
        for (const Emitter& e : t.emitters) {
            emitters.push_back(Json{{"lo", e.band.lo},
                                    {"hi", e.band.hi},
                                    {"max_bandwidth", e.max_bandwidth}});
        }
        tracks.push_back(Json{{"id", t.id},
                              {"goal_rate", t.goal_rate},
                              {"emitters", std::move(emitters)}});
    }
    Json surveys = Json::array();
    for (const Survey& s : instance.surveys) {
        surveys.push_back(Json{{"id", s.id},
                               {"lo", s.band.lo},
                               {"hi", s.band.hi},
                               {"goal_rate", s.goal_rate}});
    }
    return Json{{"spec", to_json(instance.spec)},
                {"tracks", std::move(tracks)},
                {"surveys", std::move(surveys)},
                {"meta", {{"seed", instance.meta.seed},
                          {"utilization", instance.meta.utilization},
                          {"track_proportion", instance.meta.track_proportion}}}};
}

inline Instance instance_from_json(const Json& j) {
    Instance instance;
    instance.spec = system_spec_from_json(j.at("spec"));
    for (const auto& jt : j.at("tracks")) {
        Track t;
        t.id = jt.at("id").get<int>();
        t.goal_rate = jt.at("goal_rate").get<double>();
        for (const auto& je : jt.at("emitters")) {
            t.emitters.push_back(Emitter{
                SingleInterval(je.at("lo").get<double>(), je.at("hi").get<double>()),
                je.at("max_bandwidth").get<double>()});
        }
        instance.tracks.push_back(std::move(t));
    }
    for (const auto& js : j.at("surveys")) {
        instance.surveys.push_back(Survey{
            js.at("id").get<int>(),
            SingleInterval(js.at("lo").get<double>(), js.at("hi").get<double>()),
            js.at("goal_rate").get<double>()});
    }
    const auto& meta = j.at("meta");
    instance.meta.seed = meta.at("seed").get<std::uint64_t>();
    instance.meta.utilization = meta.at("utilization").get<double>();
    instance.meta.track_proportion = meta.at("track_proportion").get<double>();
    return instance;
}

inline Json to_json(const TuningPlan& plan) {
    Json cells = Json::array();
    for (int n = 0; n < plan.node_count(); ++n) {
        for (int r = 0; r < plan.receivers_per_node(); ++r) {
            for (int t = 0; t < plan.steps_per_plan(); ++t) {
                const auto& cell = plan.cell(n, r, t);
                if (!cell) continue;
                Json singles = Json::array();
                for (const SingleInterval& s : cell->body.singles()) {
                    singles.push_back(Json::array({s.lo, s.hi}));
                }
                cells.push_back(Json{{"node", n},
                                     {"receiver", r},
                                     {"step", t},
                                     {"singles", std::move(singles)}});
            }
        }
    }
    return Json{{"nodes", plan.node_count()},
                {"receivers", plan.receivers_per_node()},
                {"steps", plan.steps_per_plan()},
                {"cells", std::move(cells)}};
}

inline TuningPlan tuning_plan_from_json(const Json& j) {
    TuningPlan plan(j.at("nodes").get<int>(), j.at("receivers").get<int>(),
                    j.at("steps").get<int>());
    for (const auto& jc : j.at("cells")) {
        std::vector<SingleInterval> singles;
        for (const auto& js : jc.at("singles")) {
            singles.emplace_back(js.at(0).get<double>(), js.at(1).get<double>());
        }
        plan.set_cell(jc.at("node").get<int>(), jc.at("receiver").get<int>(),
                      jc.at("step").get<int>(),
                      Cell{MultipleInterval(std::move(singles)), -1});
    }
    return plan;
}

/// Result of driving one algorithm over one instance.
struct RunRecord {
    std::string instance_id;
    std::string algorithm;
    int plans_emitted = 0;
    double objective = 0.0;
    double scenario_u = 0.0;
    double scenario_p = 0.0;
    std::uint64_t instance_seed = 0;
    std::uint64_t algorithm_seed = 0;
    std::vector<CycleRecord> cycles;
    std::vector<TuningPlan> plans;
};

inline Json to_json(const RunRecord& record) {
    Json cycles = Json::array();
    for (const CycleRecord& c : record.cycles) {
        cycles.push_back(Json{{"lp_seconds", c.lp_seconds},
                              {"plan_seconds", c.plan_seconds},
                              {"total_seconds", c.total_seconds},
                              {"overrun", c.overrun}});
    }
    Json plans = Json::array();
    for (const TuningPlan& p : record.plans) plans.push_back(to_json(p));
    return Json{{"instance_id", record.instance_id},
                {"algorithm", record.algorithm},
                {"plans_emitted", record.plans_emitted},
                {"objective", record.objective},
                {"scenario", {{"utilization", record.scenario_u},
                              {"track_proportion", record.scenario_p}}},
                {"seeds", {{"instance", record.instance_seed},
                           {"algorithm", record.algorithm_seed}}},
                {"cycles", std::move(cycles)},
                {"plans", std::move(plans)}};
}

inline RunRecord run_record_from_json(const Json& j) {
    RunRecord record;
    record.instance_id = j.at("instance_id").get<std::string>();
    record.algorithm = j.at("algorithm").get<std::string>();
    record.plans_emitted = j.at("plans_emitted").get<int>();
    record.objective = j.at("objective").get<double>();
    record.scenario_u = j.at("scenario").at("utilization").get<double>();
    record.scenario_p = j.at("scenario").at("track_proportion").get<double>();
    record.instance_seed = j.at("seeds").at("instance").get<std::uint64_t>();
    record.algorithm_seed = j.at("seeds").at("algorithm").get<std::uint64_t>();
    for (const auto& jc : j.at("cycles")) {
        record.cycles.push_back(CycleRecord{jc.at("lp_seconds").get<double>(),
                                            jc.at("plan_seconds").get<double>(),
                                            jc.at("total_seconds").get<double>(),
                                            jc.at("overrun").get<bool>()});
    }
    for (const auto& jp : j.at("plans")) record.plans.push_back(tuning_plan_from_json(jp));
    return record;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_instance(const Instance& instance, const std::filesystem::path& path) {
    write_text_file(path, to_json(instance).dump(2) + "\n");
}

inline Instance read_instance(const std::filesystem::path& path) {
    Instance instance = instance_from_json(Json::parse(read_text_file(path)));
    instance.id = path.stem().string();
    return instance;
}

/// Fixed-format decimal for CSV cells; deterministic for identical inputs.
inline std::string format_number(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", v);
    return buffer;
}

}  // namespace rtune

#endif  // RESOURCETUNE_IO_HPP
