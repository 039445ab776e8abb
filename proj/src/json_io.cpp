#include "segsched/json_io.hpp"

#include <fstream>
#include <sstream>

namespace segsched {

using nlohmann::json;

namespace {

json opt(const std::optional<Tick>& v) { return v ? json(*v) : json(nullptr); }

json key_fields(const SegmentKey& k) { return {{"task", k.task}, {"job", k.job}, {"seg", k.seg}}; }

SegmentKey key_from(const json& j) {
    return {j.at("task").get<TaskId>(), j.at("job").get<std::uint64_t>(), j.at("seg").get<std::uint32_t>()};
}

Policy policy_from_name(const std::string& name, const json& order) {
    if (name == "RM")
        return Policy::rm();
    if (name == "EDF")
        return Policy::edf();
    if (name == "Explicit")
        return Policy::explicit_order(order_from_json(order));
    throw ModelError("unknown policy '" + name + "'");
}

}  // namespace

json to_json(const TaskSet& ts) {
    json tasks = json::array();
    for (const auto& t : ts.tasks)
        tasks.push_back({{"id", t.id},
                         {"period", t.period},
                         {"deadline", t.deadline},
                         {"jitter_max", t.jitter_max},
                         {"first_release", t.first_release},
                         {"execs", t.execs},
                         {"susps", t.susps}});
    return {{"tick_scale", ts.tick_scale}, {"tasks", tasks}};
}

TaskSet taskset_from_json(const json& j) {
    TaskSet ts;
    ts.tick_scale = j.value("tick_scale", Tick{1});
    for (const auto& t : j.at("tasks")) {
        SuspendingTask task;
        task.id = t.at("id").get<TaskId>();
        task.period = t.at("period").get<Tick>();
        task.deadline = t.value("deadline", task.period);
        task.jitter_max = t.value("jitter_max", Tick{0});
        task.first_release = t.value("first_release", Tick{0});
        task.execs = t.at("execs").get<std::vector<Tick>>();
        task.susps = t.value("susps", std::vector<Tick>{});
        ts.tasks.push_back(std::move(task));
    }
    require_valid(ts);
    return ts;
}

json to_json(const Schedule& sched) {
    json arr = json::array();
    for (const auto& rec : sched.segments) {
        json ivs = json::array();
        for (const auto& iv : rec.intervals)
            ivs.push_back({iv.begin, iv.end});
        json e = key_fields(rec.key);
        e["release"] = opt(rec.release);
        e["start"] = opt(rec.start);
        e["finish"] = opt(rec.finish);
        e["intervals"] = ivs;
        arr.push_back(e);
    }
    return arr;
}

json to_json(const PriorityOrder& order) {
    json arr = json::array();
    for (const auto& [key, rank] : order.entries()) {
        json e = key_fields(key);
        e["rank"] = rank;
        arr.push_back(e);
    }
    return arr;
}

PriorityOrder order_from_json(const json& j) {
    std::vector<std::pair<SegmentKey, std::uint64_t>> r;
    for (const auto& e : j)
        r.emplace_back(key_from(e), e.at("rank").get<std::uint64_t>());
    return PriorityOrder(std::move(r));
}

json to_json(const NominalPlan& plan) {
    json floors = json::array();
    for (const auto& [key, tick] : plan.release_floors) {
        json e = key_fields(key);
        e["release"] = tick == kInfinity ? json(nullptr) : json(tick);
        floors.push_back(e);
    }
    return {{"taskset", to_json(plan.taskset)},
            {"policy", plan.policy.name()},
            {"horizon", plan.horizon},
            {"feasible", plan.feasible},
            {"order", to_json(plan.order)},
            {"schedule", to_json(plan.nominal)},
            {"release_floors", floors},
            {"preference", to_json(plan.preference)}};
}

NominalPlan plan_from_json(const json& j) {
    auto ts = taskset_from_json(j.at("taskset"));
    auto policy = policy_from_name(j.at("policy").get<std::string>(), j.value("order", json::array()));
    auto plan = build_nominal(ts, policy, j.at("horizon").get<Tick>());
    if (j.contains("preference") && order_from_json(j.at("preference")) != plan.preference)
        throw ModelError("plan file: preference ranks disagree with the rebuilt nominal schedule");
    if (j.contains("release_floors")) {
        for (const auto& e : j.at("release_floors")) {
            auto key = key_from(e);
            Tick stored = e.at("release").is_null() ? kInfinity : e.at("release").get<Tick>();
            auto i = plan.nominal.index.find(key);
            if (i == SegmentIndex::npos || plan.release_floors[i].second != stored)
                throw ModelError("plan file: release floor of " + to_string(key) + " disagrees with the schedule");
        }
    }
    return plan;
}

json to_json(const RuntimeBehavior& b) {
    json draws = json::array();
    for (const auto& d : b.draws) {
        json e = key_fields(d.key);
        e["exec"] = d.exec;
        e["susp"] = d.susp_before;
        draws.push_back(e);
    }
    return {{"seed", b.seed}, {"provenance", b.provenance}, {"draws", draws}};
}

RuntimeBehavior behavior_from_json(const json& j) {
    RuntimeBehavior b;
    b.seed = j.value("seed", std::uint64_t{0});
    b.provenance = j.value("provenance", std::string{});
    for (const auto& e : j.at("draws"))
        b.draws.push_back({key_from(e), e.at("exec").get<Tick>(), e.at("susp").get<Tick>()});
    return b;
}

json to_json(const AnomalyReport& report) {
    json v = json::array();
    for (const auto& x : report.violations) {
        json e = key_fields(x.key);
        e["nominal_finish"] = x.nominal_finish;
        e["online_finish"] = opt(x.online_finish);
        v.push_back(e);
    }
    return {{"anomaly_free", report.anomaly_free}, {"violations", v}};
}

json to_json(const Witness& w) {
    return {{"trial", w.trial}, {"behavior", to_json(w.behavior)}, {"violations", to_json(w.report)["violations"]}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace segsched
