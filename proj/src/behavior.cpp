#include "segsched/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "segsched/rng.hpp"

namespace segsched {

namespace {

Tick lower_draw_bound(double floor_fraction, Tick max) {
    auto scaled = static_cast<Tick>(std::ceil(floor_fraction * static_cast<double>(max)));
    return std::clamp<Tick>(scaled, 1, max);
}

}  // namespace

RuntimeBehavior sample_behavior(const TaskSet& ts, Tick horizon, const BehaviorProfile& profile, std::uint64_t seed) {
    if (!(profile.exec_floor > 0.0 && profile.exec_floor <= 1.0) ||
        !(profile.susp_floor > 0.0 && profile.susp_floor <= 1.0))
        throw ModelError("behavior profile floors must lie in (0, 1]");
    std::mt19937_64 rng(seed);
    RuntimeBehavior b;
    b.seed = seed;
    b.provenance = "uniform";
    for (const auto& inst : expand_jobs(ts, horizon)) {
        SegmentDraw d{inst.key, inst.wcet, 0};
        d.exec = std::uniform_int_distribution<Tick>(lower_draw_bound(profile.exec_floor, inst.wcet), inst.wcet)(rng);
        if (inst.key.seg == 0)
            d.susp_before = std::uniform_int_distribution<Tick>(0, inst.max_susp_before)(rng);
        else
            d.susp_before = std::uniform_int_distribution<Tick>(
                lower_draw_bound(profile.susp_floor, inst.max_susp_before), inst.max_susp_before)(rng);
        b.draws.push_back(d);
    }
    return b;
}

RuntimeBehavior replay_behavior(const TaskSet& ts, Tick horizon, std::span<const SegmentDraw> overrides) {
    auto b = worst_case_behavior(ts, horizon);
    b.provenance = "replay";
    for (const auto& o : overrides) {
        auto it = std::find_if(b.draws.begin(), b.draws.end(), [&](const SegmentDraw& d) { return d.key == o.key; });
        if (it == b.draws.end())
            throw ModelError("replay override for " + to_string(o.key) + " is outside the horizon");
        *it = o;
    }
    return b;
}

std::optional<std::string> behavior_out_of_bounds(const TaskSet& ts, Tick horizon, const RuntimeBehavior& b) {
    auto instances = expand_jobs(ts, horizon);
    SegmentIndex index(instances);
    if (b.draws.size() != instances.size())
        return "behavior has " + std::to_string(b.draws.size()) + " draws for " + std::to_string(instances.size()) +
               " instances";
    for (const auto& d : b.draws) {
        auto i = index.find(d.key);
        if (i == SegmentIndex::npos)
            return "draw for unknown segment " + to_string(d.key);
        const auto& inst = instances[i];
        if (d.exec < 1 || d.exec > inst.wcet)
            return "execution draw out of (0, C] for " + to_string(d.key);
        if (inst.key.seg == 0 && d.susp_before > inst.max_susp_before)
            return "jitter draw out of [0, J] for " + to_string(d.key);
        if (inst.key.seg > 0 && (d.susp_before < 1 || d.susp_before > inst.max_susp_before))
            return "suspension draw out of (0, S] for " + to_string(d.key);
    }
    return std::nullopt;
}

const char* to_string(OnlineMode mode) {
    switch (mode) {
    case OnlineMode::Untreated:
        return "untreated";
    case OnlineMode::Enforce:
        return "enforce";
    case OnlineMode::Preference:
        return "preference";
    }
    return "?";
}

const PriorityOrder& order_for(const NominalPlan& plan, OnlineMode mode) {
    return mode == OnlineMode::Preference ? plan.preference : plan.order;
}

Schedule run_online(const NominalPlan& plan, const RuntimeBehavior& behavior, OnlineMode mode) {
    switch (mode) {
    case OnlineMode::Untreated:
        return simulate(plan.taskset, plan.order, behavior, ReleaseRule::natural(), plan.horizon, kInfinity);
    case OnlineMode::Enforce:
        return simulate(plan.taskset, plan.order, behavior, ReleaseRule::enforced(plan.release_floors), plan.horizon,
                        kInfinity);
    case OnlineMode::Preference:
        return simulate(plan.taskset, plan.preference, behavior, ReleaseRule::natural(), plan.horizon, kInfinity);
    }
    throw SimError("unknown online mode");
}

AnomalyReport check_anomaly_free(const NominalPlan& plan, const Schedule& online) {
    AnomalyReport report;
    const auto& nominal = plan.nominal;
    if (online.segments.size() != nominal.segments.size())
        throw SimError("online and nominal schedules cover different segment sets");
    for (std::size_t i = 0; i < nominal.segments.size(); ++i) {
        const auto& nom = nominal.segments[i];
        const auto& onl = online.segments[i];
        if (nom.key != onl.key)
            throw SimError("online and nominal schedules cover different segment sets");
        if (!nom.completed())
            continue;  // nothing to compare against
        if (!onl.completed() || *onl.finish > *nom.finish)
            report.violations.push_back({nom.key, *nom.finish, onl.finish});
    }
    report.anomaly_free = report.violations.empty();
    return report;
}

std::optional<Witness> anomaly_search(const TaskSet& ts, const Policy& policy, std::uint64_t trials,
                                      std::uint64_t seed, const BehaviorProfile& profile) {
    auto plan = build_nominal(ts, policy);
    if (!plan.feasible)
        throw ModelError("anomaly search needs a feasible nominal plan");
    for (std::uint64_t k = 0; k < trials; ++k) {
        auto behavior = sample_behavior(ts, plan.horizon, profile, derive_seed(seed, {k}));
        auto online = run_online(plan, behavior, OnlineMode::Untreated);
        auto report = check_anomaly_free(plan, online);
        if (!report.anomaly_free)
            return Witness{k, std::move(behavior), std::move(report)};
    }
    return std::nullopt;
}

}  // namespace segsched
