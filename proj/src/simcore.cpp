#include "segsched/simcore.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace segsched {

Tick measure(std::span<const Interval> intervals) {
    Tick total = 0;
    Tick prev_end = 0;
    bool first = true;
    for (const auto& iv : intervals) {
        if (iv.end < iv.begin)
            throw SimError("measure: interval with end before begin");
        if (!first && iv.begin < prev_end)
            throw SimError("measure: intervals overlap or are out of order");
        total += iv.length();
        prev_end = iv.end;
        first = false;
    }
    return total;
}

// ---------------------------------------------------------------------------
// PriorityOrder

PriorityOrder::PriorityOrder(std::vector<std::pair<SegmentKey, std::uint64_t>> ranks) : by_key_(std::move(ranks)) {
    std::sort(by_key_.begin(), by_key_.end());
    for (std::size_t i = 1; i < by_key_.size(); ++i)
        if (by_key_[i - 1].first == by_key_[i].first)
            throw SimError("priority order lists " + to_string(by_key_[i].first) + " twice");
    std::vector<std::uint64_t> r;
    r.reserve(by_key_.size());
    for (const auto& e : by_key_)
        r.push_back(e.second);
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end())
        throw SimError("priority order is not strict: duplicate rank");
}

PriorityOrder PriorityOrder::from_sequence(std::span<const SegmentKey> highest_first) {
    std::vector<std::pair<SegmentKey, std::uint64_t>> r;
    r.reserve(highest_first.size());
    for (std::size_t i = 0; i < highest_first.size(); ++i)
        r.emplace_back(highest_first[i], i);
    return PriorityOrder(std::move(r));
}

std::optional<std::uint64_t> PriorityOrder::find(const SegmentKey& key) const {
    auto it = std::lower_bound(by_key_.begin(), by_key_.end(), key,
                               [](const auto& e, const SegmentKey& k) { return e.first < k; });
    if (it == by_key_.end() || it->first != key)
        return std::nullopt;
    return it->second;
}

std::uint64_t PriorityOrder::rank(const SegmentKey& key) const {
    auto r = find(key);
    if (!r)
        throw SimError("priority order has no rank for " + to_string(key));
    return *r;
}

std::vector<SegmentKey> PriorityOrder::highest_first() const {
    auto copy = by_key_;
    std::sort(copy.begin(), copy.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<SegmentKey> out;
    out.reserve(copy.size());
    for (const auto& e : copy)
        out.push_back(e.first);
    return out;
}

std::vector<std::uint64_t> PriorityOrder::aligned(std::span<const SegmentInstance> instances) const {
    std::vector<std::uint64_t> out;
    out.reserve(instances.size());
    for (const auto& inst : instances)
        out.push_back(rank(inst.key));
    return out;
}

std::string Policy::name() const {
    switch (kind) {
    case PolicyKind::RM:
        return "RM";
    case PolicyKind::EDF:
        return "EDF";
    case PolicyKind::Explicit:
        return "Explicit";
    }
    return "?";
}

PriorityOrder assign_priorities(const TaskSet& ts, const Policy& policy, Tick horizon) {
    auto instances = expand_jobs(ts, horizon);
    if (policy.kind == PolicyKind::Explicit) {
        for (const auto& inst : instances)
            if (!policy.order.find(inst.key))
                throw SimError("explicit priority order is missing " + to_string(inst.key));
        return policy.order;
    }

    using SortKey = std::tuple<Tick, TaskId, std::uint64_t, std::uint32_t>;
    std::vector<std::pair<SortKey, SegmentKey>> keyed;
    keyed.reserve(instances.size());
    for (const auto& inst : instances) {
        Tick primary = policy.kind == PolicyKind::RM ? ts.task(inst.key.task).period : inst.job_deadline;
        keyed.push_back({{primary, inst.key.task, inst.key.job, inst.key.seg}, inst.key});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<SegmentKey> seq;
    seq.reserve(keyed.size());
    for (const auto& k : keyed)
        seq.push_back(k.second);
    return PriorityOrder::from_sequence(seq);
}

PriorityOrder task_level_order(const TaskSet& ts, std::span<const TaskId> tasks_highest_first, Tick horizon) {
    auto instances = expand_jobs(ts, horizon);
    auto level = [&](TaskId id) -> std::size_t {
        auto it = std::find(tasks_highest_first.begin(), tasks_highest_first.end(), id);
        if (it == tasks_highest_first.end())
            throw SimError("task-level order does not mention task " + std::to_string(id));
        return static_cast<std::size_t>(it - tasks_highest_first.begin());
    };
    std::vector<std::pair<std::tuple<std::size_t, std::uint64_t, std::uint32_t>, SegmentKey>> keyed;
    for (const auto& inst : instances)
        keyed.push_back({{level(inst.key.task), inst.key.job, inst.key.seg}, inst.key});
    std::sort(keyed.begin(), keyed.end());
    std::vector<SegmentKey> seq;
    for (const auto& k : keyed)
        seq.push_back(k.second);
    return PriorityOrder::from_sequence(seq);
}

// ---------------------------------------------------------------------------
// Schedule

Tick SegmentRecord::executed() const {
    Tick total = 0;
    for (const auto& iv : intervals)
        total += iv.length();
    return total;
}

bool Schedule::all_completed() const {
    return std::all_of(segments.begin(), segments.end(), [](const SegmentRecord& s) { return s.completed(); });
}

RuntimeBehavior worst_case_behavior(const TaskSet& ts, Tick horizon) {
    RuntimeBehavior b;
    b.provenance = "worst-case";
    for (const auto& inst : expand_jobs(ts, horizon))
        b.draws.push_back({inst.key, inst.wcet, inst.max_susp_before});
    return b;
}

namespace {

struct Draws {
    std::vector<Tick> exec;
    std::vector<Tick> susp;
};

Schedule run(const std::vector<SegmentInstance>& instances, SegmentIndex index, std::vector<std::uint64_t> rank,
             const Draws& draws, const std::vector<Tick>& floors, Tick horizon, Tick until, bool nominal) {
    const std::size_t n = instances.size();
    Schedule sched;
    sched.horizon = horizon;
    sched.nominal = nominal;
    sched.instances = instances;
    sched.index = std::move(index);
    sched.segments.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sched.segments[i].key = instances[i].key;

    std::vector<Tick> remaining = draws.exec;

    using Ready = std::pair<std::uint64_t, std::size_t>;  // (rank, instance)
    std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
    using Pending = std::pair<Tick, std::size_t>;  // (release time, instance)
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;

    auto schedule_release = [&](std::size_t i, Tick natural) {
        Tick r = floors.empty() ? natural : std::max(natural, floors[i]);
        sched.segments[i].release = r;
        pending.push({r, i});
    };

    for (std::size_t i = 0; i < n; ++i)
        if (instances[i].key.seg == 0)
            schedule_release(i, instances[i].job_release + draws.susp[i]);

    Tick t = 0;
    while (t < until) {
        while (!pending.empty() && pending.top().first <= t) {
            auto i = pending.top().second;
            pending.pop();
            ready.push({rank[i], i});
        }
        if (ready.empty()) {
            if (pending.empty())
                break;
            t = pending.top().first;
            continue;
        }

        const std::size_t cur = ready.top().second;
        auto& rec = sched.segments[cur];
        if (!rec.start)
            rec.start = t;
        Tick next = std::min(t + remaining[cur], until);
        if (!pending.empty())
            next = std::min(next, pending.top().first);

        if (!rec.intervals.empty() && rec.intervals.back().end == t)
            rec.intervals.back().end = next;
        else
            rec.intervals.push_back({t, next});
        remaining[cur] -= next - t;
        t = next;

        if (remaining[cur] == 0) {
            rec.finish = t;
            ready.pop();
            if (!instances[cur].last_in_job)
                schedule_release(cur + 1, t + draws.susp[cur + 1]);
        }
    }
    return sched;
}

std::vector<Tick> aligned_floors(const ReleaseRule& rule, const std::vector<SegmentInstance>& instances,
                                 const SegmentIndex& index) {
    if (rule.mode == ReleaseRule::Mode::Natural)
        return {};
    std::vector<Tick> floors(instances.size(), kInfinity);
    std::vector<bool> seen(instances.size(), false);
    for (const auto& [key, tick] : rule.floors) {
        auto i = index.find(key);
        if (i != SegmentIndex::npos) {
            floors[i] = tick;
            seen[i] = true;
        }
    }
    for (std::size_t i = 0; i < floors.size(); ++i)
        if (!seen[i])
            throw SimError("enforced release rule has no floor for " + to_string(instances[i].key));
    return floors;
}

}  // namespace

Schedule simulate(const TaskSet& ts, const PriorityOrder& order, WorstCase, const ReleaseRule& rule, Tick horizon,
                  std::optional<Tick> run_until) {
    auto instances = expand_jobs(ts, horizon);
    SegmentIndex index(instances);
    Draws draws;
    for (const auto& inst : instances) {
        draws.exec.push_back(inst.wcet);
        draws.susp.push_back(inst.max_susp_before);
    }
    auto floors = aligned_floors(rule, instances, index);
    auto rank = order.aligned(instances);
    return run(instances, std::move(index), std::move(rank), draws, floors, horizon, run_until.value_or(horizon), true);
}

Schedule simulate(const TaskSet& ts, const PriorityOrder& order, const RuntimeBehavior& behavior,
                  const ReleaseRule& rule, Tick horizon, std::optional<Tick> run_until) {
    auto instances = expand_jobs(ts, horizon);
    SegmentIndex index(instances);
    const std::size_t n = instances.size();
    Draws draws{std::vector<Tick>(n, 0), std::vector<Tick>(n, 0)};
    std::vector<bool> seen(n, false);
    for (const auto& d : behavior.draws) {
        auto i = index.find(d.key);
        if (i == SegmentIndex::npos)
            throw SimError("behavior draws " + to_string(d.key) + " outside the horizon");
        if (seen[i])
            throw SimError("behavior draws " + to_string(d.key) + " twice");
        if (d.exec == 0)
            throw SimError("behavior draws zero execution for " + to_string(d.key));
        seen[i] = true;
        draws.exec[i] = d.exec;
        draws.susp[i] = d.susp_before;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i])
            throw SimError("behavior has no draw for " + to_string(instances[i].key));
    auto floors = aligned_floors(rule, instances, index);
    auto rank = order.aligned(instances);
    return run(instances, std::move(index), std::move(rank), draws, floors, horizon, run_until.value_or(horizon), false);
}

// ---------------------------------------------------------------------------
// Interference and fixed-point oracle

Tick interference(const Schedule& sched, const PriorityOrder& order, const SegmentKey& key, Interval window) {
    const auto own = order.rank(key);
    Tick total = 0;
    for (const auto& seg : sched.segments) {
        if (order.rank(seg.key) >= own)
            continue;
        for (const auto& iv : seg.intervals) {
            Tick a = std::max(iv.begin, window.begin);
            Tick b = std::min(iv.end, window.end);
            if (a < b)
                total += b - a;
        }
    }
    return total;
}

Timeline::Timeline(const Schedule& sched, std::span<const std::uint64_t> ranks) {
    for (std::size_t i = 0; i < sched.segments.size(); ++i)
        for (const auto& iv : sched.segments[i].intervals) {
            slices_.push_back({iv.begin, iv.end, ranks[i]});
            busy_ += iv.length();
        }
    std::sort(slices_.begin(), slices_.end(), [](const Slice& a, const Slice& b) { return a.begin < b.begin; });
}

Tick Timeline::higher_ranked_time(std::uint64_t rank, Tick a, Tick b) const {
    if (a >= b)
        return 0;
    // Slices are disjoint, so sorting by begin also sorts by end.
    auto it = std::upper_bound(slices_.begin(), slices_.end(), a, [](Tick v, const Slice& s) { return v < s.end; });
    Tick total = 0;
    for (; it != slices_.end() && it->begin < b; ++it) {
        if (it->rank >= rank)
            continue;
        total += std::min(it->end, b) - std::max(it->begin, a);
    }
    return total;
}

Tick Timeline::fixed_point(std::uint64_t rank, Tick release, Tick demand) const {
    Tick t = release + demand;
    Tick w = higher_ranked_time(rank, release, t);
    // Every non-final step adds at least one tick of higher-ranked execution.
    for (Tick iter = 0; iter <= busy_ + 1; ++iter) {
        Tick next = release + w + demand;
        if (next == t)
            return t;
        // W is additive over adjacent windows, so only the new part is scanned.
        w += higher_ranked_time(rank, t, next);
        t = next;
    }
    throw SimError("fixed-point iteration did not converge");
}

Tick fixed_point_finish(const Schedule& sched, const PriorityOrder& order, const SegmentKey& key) {
    const auto& rec = sched.at(key);
    if (!rec.completed() || !rec.release)
        throw SimError("fixed_point_finish: segment " + to_string(key) + " did not complete");
    auto ranks = order.aligned(sched.instances);
    Timeline tl(sched, ranks);
    return tl.fixed_point(order.rank(key), *rec.release, measure(rec.intervals));
}

}  // namespace segsched
