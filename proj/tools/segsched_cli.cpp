#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "segsched/behavior.hpp"
#include "segsched/exper.hpp"
#include "segsched/json_io.hpp"
#include "segsched/scenarios.hpp"
#include "segsched/synth.hpp"

using namespace segsched;
using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, std::vector<std::string> formats) {
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    c.format = formats.front();
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty())
        std::cout << text;
    else
        write_text_file(c.out, text);
}

std::string fmt_tick(const std::optional<Tick>& t) { return t ? std::to_string(*t) : "-"; }

std::string schedule_text(const Schedule& s) {
    std::ostringstream out;
    out << "task job seg release start finish intervals\n";
    for (const auto& r : s.segments) {
        out << r.key.task << ' ' << r.key.job << ' ' << r.key.seg << ' ' << fmt_tick(r.release) << ' '
            << fmt_tick(r.start) << ' ' << fmt_tick(r.finish);
        for (const auto& iv : r.intervals)
            out << " [" << iv.begin << ',' << iv.end << ')';
        out << '\n';
    }
    return out.str();
}

std::string report_text(const AnomalyReport& rep) {
    std::ostringstream out;
    out << (rep.anomaly_free ? "anomaly-free" : "anomalous") << '\n';
    for (const auto& v : rep.violations)
        out << to_string(v.key) << ": nominal finish " << v.nominal_finish << ", online "
            << fmt_tick(v.online_finish) << '\n';
    return out.str();
}

OnlineMode parse_mode(const std::string& s) {
    if (s == "untreated")
        return OnlineMode::Untreated;
    if (s == "enforce")
        return OnlineMode::Enforce;
    return OnlineMode::Preference;
}

NominalPlan plan_for(const TaskSet& ts, const std::string& policy) {
    if (policy == "rm")
        return build_nominal(ts, Policy::rm());
    if (policy == "edf")
        return build_nominal(ts, Policy::edf());
    if (auto p = comb(ts))
        return *p;
    // Neither is feasible: report the EDF plan so the miss is visible.
    return build_nominal(ts, Policy::edf());
}

// Behavior from --behavior FILE, or sampled from the seed.
struct BehaviorSource {
    std::string file;
    double exec_floor = 1.0;
    double susp_floor = 1.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--behavior", file, "behavior JSON (default: sample with --seed)");
        cmd->add_option("--exec-floor", exec_floor, "lower bound of sampled execution, fraction of WCET")
            ->capture_default_str();
        cmd->add_option("--susp-floor", susp_floor, "lower bound of sampled suspension, fraction of maximum")
            ->capture_default_str();
    }
    RuntimeBehavior load(const NominalPlan& plan, std::uint64_t seed) const {
        RuntimeBehavior b = file.empty()
                                ? sample_behavior(plan.taskset, plan.horizon, {exec_floor, susp_floor}, seed)
                                : behavior_from_json(read_json_file(file));
        if (auto err = behavior_out_of_bounds(plan.taskset, plan.horizon, b))
            throw ModelError("behavior out of bounds: " + *err);
        return b;
    }
};

const std::vector<std::string> kModes = {"untreated", "enforce", "preference"};
const std::vector<std::string> kPolicies = {"rm", "edf", "comb"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segment-level fixed-priority scheduling of self-suspending tasks"};
    app.require_subcommand(1);

    // gen
    Common gen_c;
    GenConfig cfg;
    std::string susp_class = "medium", jitter_class = "none";
    auto* gen = app.add_subcommand("gen", "generate a random task set");
    add_common(gen, gen_c, {"json"});
    gen->add_option("--utilization", cfg.total_utilization, "total utilization")->capture_default_str();
    gen->add_option("--tasks", cfg.n_tasks, "number of tasks")->capture_default_str();
    gen->add_option("--segments", cfg.segments_per_task, "computation segments per task")->capture_default_str();
    gen->add_option("--suspension", susp_class, "short, medium or long")->capture_default_str();
    gen->add_option("--jitter", jitter_class, "none, minor, mild or serious")->capture_default_str();
    gen->add_option("--deadline-ratio", cfg.deadline_ratio, "D = ratio * T")->capture_default_str();

    // plan
    Common plan_c;
    std::string plan_ts, plan_policy = "comb";
    auto* plan = app.add_subcommand("plan", "build the nominal schedule and both treatments");
    add_common(plan, plan_c, {"json", "text"});
    plan->add_option("--taskset", plan_ts, "task set JSON")->required();
    plan->add_option("--policy", plan_policy, "rm, edf or comb")->check(CLI::IsMember(kPolicies))->capture_default_str();

    // simulate
    Common sim_c;
    std::string sim_plan, sim_mode = "untreated";
    BehaviorSource sim_b;
    auto* sim = app.add_subcommand("simulate", "online run of a plan");
    add_common(sim, sim_c, {"json", "text"});
    sim->add_option("--plan", sim_plan, "plan JSON")->required();
    sim->add_option("--mode", sim_mode, "untreated, enforce or preference")->check(CLI::IsMember(kModes))->capture_default_str();
    sim_b.add(sim);

    // check
    Common chk_c;
    std::string chk_plan, chk_mode = "untreated";
    BehaviorSource chk_b;
    auto* chk = app.add_subcommand("check", "anomaly report of an online run (exit 2 on violation)");
    add_common(chk, chk_c, {"json", "text"});
    chk->add_option("--plan", chk_plan, "plan JSON")->required();
    chk->add_option("--mode", chk_mode, "untreated, enforce or preference")->check(CLI::IsMember(kModes))->capture_default_str();
    chk_b.add(chk);

    // fuzz
    Common fuzz_c;
    std::string fuzz_ts, fuzz_policy = "rm";
    std::uint64_t fuzz_trials = 1000;
    BehaviorProfile fuzz_profile;
    auto* fuzz = app.add_subcommand("fuzz", "search sampled behaviors for an untreated anomaly");
    add_common(fuzz, fuzz_c, {"json", "text"});
    fuzz->add_option("--taskset", fuzz_ts, "task set JSON")->required();
    fuzz->add_option("--policy", fuzz_policy, "rm or edf")->check(CLI::IsMember({"rm", "edf"}))->capture_default_str();
    fuzz->add_option("--trials", fuzz_trials, "number of sampled behaviors")->capture_default_str();
    fuzz->add_option("--exec-floor", fuzz_profile.exec_floor, "lower bound of execution, fraction of WCET")
        ->capture_default_str();
    fuzz->add_option("--susp-floor", fuzz_profile.susp_floor, "lower bound of suspension, fraction of maximum")
        ->capture_default_str();

    // sweep
    Common sw_c;
    SweepSpec spec;
    std::vector<double> sw_grid;
    std::vector<std::string> sw_algs;
    std::string sw_susp = "medium", sw_jitter = "none";
    auto* sw = app.add_subcommand("sweep", "acceptance ratio over a utilization grid");
    add_common(sw, sw_c, {"csv", "json"});
    sw->add_option("--utilizations", sw_grid, "grid points (default 0, 0.05, ..., 1)");
    sw->add_option("--sets", spec.sets_per_point, "task sets per point")->capture_default_str();
    sw->add_option("--tasks", spec.base.n_tasks, "tasks per set")->capture_default_str();
    sw->add_option("--segments", spec.base.segments_per_task, "segments per task")->capture_default_str();
    sw->add_option("--suspension", sw_susp, "short, medium or long")->capture_default_str();
    sw->add_option("--jitter", sw_jitter, "none, minor, mild or serious")->capture_default_str();
    sw->add_option("--algorithms", sw_algs, "NOM-EDF NOM-RM COMB NOM-EDF-JT NOM-RM-JT COMB-JT");
    sw->add_option("--workers", spec.workers, "threads (0: all cores)")->capture_default_str();

    // demo
    Common demo_c;
    int figure = 3;
    auto* demo = app.add_subcommand("demo", "hand-built example schedules");
    add_common(demo, demo_c, {"text", "json"});
    demo->add_option("--figure", figure, "1, 2, 3, 5 or 8")->check(CLI::IsMember({1, 2, 3, 5, 8}))->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            cfg.suspension = parse_suspension_class(susp_class);
            cfg.jitter = parse_jitter_class(jitter_class);
            emit(gen_c, to_json(generate_taskset(cfg, gen_c.seed)).dump(2) + "\n");
        } else if (plan->parsed()) {
            auto p = plan_for(taskset_from_json(read_json_file(plan_ts)), plan_policy);
            if (plan_c.format == "json") {
                emit(plan_c, to_json(p).dump(2) + "\n");
            } else {
                std::string text = "policy " + p.policy.name() + ", horizon " + std::to_string(p.horizon) +
                                   (p.feasible ? ", feasible\n" : ", infeasible\n");
                emit(plan_c, text + schedule_text(p.nominal));
            }
            return p.feasible ? 0 : 2;
        } else if (sim->parsed()) {
            auto p = plan_from_json(read_json_file(sim_plan));
            auto s = run_online(p, sim_b.load(p, sim_c.seed), parse_mode(sim_mode));
            emit(sim_c, sim_c.format == "json" ? to_json(s).dump(2) + "\n" : schedule_text(s));
        } else if (chk->parsed()) {
            auto p = plan_from_json(read_json_file(chk_plan));
            auto rep = check_anomaly_free(p, run_online(p, chk_b.load(p, chk_c.seed), parse_mode(chk_mode)));
            emit(chk_c, chk_c.format == "json" ? to_json(rep).dump(2) + "\n" : report_text(rep));
            return rep.anomaly_free ? 0 : 2;
        } else if (fuzz->parsed()) {
            auto ts = taskset_from_json(read_json_file(fuzz_ts));
            auto w = anomaly_search(ts, fuzz_policy == "rm" ? Policy::rm() : Policy::edf(), fuzz_trials, fuzz_c.seed,
                                    fuzz_profile);
            if (fuzz_c.format == "json")
                emit(fuzz_c, (w ? to_json(*w) : json{{"witness", nullptr}}).dump(2) + "\n");
            else
                emit(fuzz_c, w ? "witness at trial " + std::to_string(w->trial) + "\n" + report_text(w->report)
                               : "no anomaly in " + std::to_string(fuzz_trials) + " trials\n");
            return w ? 2 : 0;
        } else if (sw->parsed()) {
            spec.utilizations = sw_grid.empty() ? default_grid() : sw_grid;
            spec.base.suspension = parse_suspension_class(sw_susp);
            spec.base.jitter = parse_jitter_class(sw_jitter);
            spec.master_seed = sw_c.seed;
            if (!sw_algs.empty()) {
                spec.algorithms.clear();
                for (const auto& a : sw_algs)
                    spec.algorithms.push_back(parse_algorithm(a));
            }
            auto res = acceptance_curve(spec);
            for (const auto& line : res.log)
                std::cerr << line << '\n';
            auto format = sw_c.format == "csv" ? ResultFormat::Csv : ResultFormat::Json;
            if (sw_c.out.empty())
                std::cout << (format == ResultFormat::Csv ? to_csv(res) : to_json_text(res));
            else
                emit_results(res, format, sw_c.out);
        } else if (demo->parsed()) {
            auto sc = scenarios::by_figure(figure);
            auto p = build_nominal(sc.taskset, sc.policy);
            auto b = replay_behavior(sc.taskset, p.horizon, sc.draws);
            if (demo_c.format == "json") {
                json j{{"scenario", sc.name}, {"plan", to_json(p)}, {"behavior", to_json(b)}};
                if (!sc.draws.empty())
                    for (auto mode : {OnlineMode::Untreated, OnlineMode::Enforce, OnlineMode::Preference}) {
                        auto s = run_online(p, b, mode);
                        j["online"][to_string(mode)] = {{"schedule", to_json(s)},
                                                        {"report", to_json(check_anomaly_free(p, s))}};
                    }
                emit(demo_c, j.dump(2) + "\n");
            } else {
                std::string text = sc.name + " (tick scale " + std::to_string(sc.taskset.tick_scale) + ")\n\nnominal\n" +
                                   schedule_text(p.nominal);
                if (!sc.draws.empty())
                    for (auto mode : {OnlineMode::Untreated, OnlineMode::Enforce, OnlineMode::Preference}) {
                        auto s = run_online(p, b, mode);
                        text += std::string("\n") + to_string(mode) + "\n" + schedule_text(s) +
                                report_text(check_anomaly_free(p, s));
                    }
                emit(demo_c, text);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
