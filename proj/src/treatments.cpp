#include "segsched/treatments.hpp"

#include <algorithm>
#include <tuple>

namespace segsched {

namespace {

PriorityOrder preference_from(const Schedule& nominal) {
    // Completed segments by nominal finish; anything unfinished goes last in
    // key order so the order stays total for infeasible plans.
    std::vector<std::pair<Tick, SegmentKey>> done;
    std::vector<SegmentKey> rest;
    for (const auto& rec : nominal.segments) {
        if (rec.completed())
            done.emplace_back(*rec.finish, rec.key);
        else
            rest.push_back(rec.key);
    }
    std::sort(done.begin(), done.end());
    for (std::size_t i = 1; i < done.size(); ++i)
        if (done[i - 1].first == done[i].first)
            throw SimError("two segments finish at the same tick in the nominal schedule");
    std::sort(rest.begin(), rest.end());
    std::vector<SegmentKey> seq;
    seq.reserve(nominal.segments.size());
    for (const auto& d : done)
        seq.push_back(d.second);
    seq.insert(seq.end(), rest.begin(), rest.end());
    return PriorityOrder::from_sequence(seq);
}

}  // namespace

std::optional<JobMiss> first_miss(const NominalPlan& plan) {
    std::optional<JobMiss> best;
    auto better = [](const JobMiss& a, const JobMiss& b) {
        return std::tie(a.deadline, a.task, a.job) < std::tie(b.deadline, b.task, b.job);
    };
    const auto& sched = plan.nominal;
    for (std::size_t i = 0; i < sched.instances.size(); ++i) {
        const auto& inst = sched.instances[i];
        const auto& rec = sched.segments[i];
        bool missed = !rec.completed() || (inst.last_in_job && *rec.finish > inst.job_deadline);
        if (!missed)
            continue;
        JobMiss m{inst.key.task, inst.key.job, inst.job_deadline, rec.finish};
        if (!rec.completed())
            m.finish.reset();
        if (!best || better(m, *best))
            best = m;
    }
    return best;
}

NominalPlan build_nominal(const TaskSet& ts, const Policy& policy, std::optional<Tick> horizon) {
    require_valid(ts);
    NominalPlan plan;
    plan.taskset = ts;
    plan.policy = policy;
    plan.horizon = horizon ? *horizon : hyperperiod(ts);
    plan.order = assign_priorities(ts, policy, plan.horizon);
    plan.nominal = simulate(ts, plan.order, WorstCase{}, ReleaseRule::natural(), plan.horizon);

    plan.release_floors.reserve(plan.nominal.segments.size());
    for (const auto& rec : plan.nominal.segments)
        plan.release_floors.emplace_back(rec.key, rec.release ? *rec.release : kInfinity);
    plan.preference = preference_from(plan.nominal);
    plan.feasible = !first_miss(plan).has_value();
    return plan;
}

Verdict exact_schedulability(const TaskSet& ts, const Policy& policy) {
    require_valid(ts);
    if (!ts.synchronous())
        throw ModelError("exact schedulability test requires synchronous releases");
    auto plan = build_nominal(ts, policy);
    Verdict v;
    if (plan.feasible)
        v.plan = std::move(plan);
    else
        v.miss = first_miss(plan);
    return v;
}

std::optional<NominalPlan> comb(const TaskSet& ts, const std::vector<Policy>& policies) {
    for (const auto& p : policies) {
        auto v = exact_schedulability(ts, p);
        if (v.schedulable())
            return std::move(*v.plan);
    }
    return std::nullopt;
}

}  // namespace segsched
