#include "segsched/checks.hpp"

#include <algorithm>

namespace segsched {

std::vector<OracleMismatch> check_oracle_equivalence(const Schedule& sched, const PriorityOrder& order) {
    auto ranks = order.aligned(sched.instances);
    Timeline tl(sched, ranks);
    std::vector<OracleMismatch> out;
    for (std::size_t i = 0; i < sched.segments.size(); ++i) {
        const auto& rec = sched.segments[i];
        if (!rec.completed())
            continue;
        Tick oracle = kInfinity;
        try {
            oracle = tl.fixed_point(ranks[i], *rec.release, measure(rec.intervals));
        } catch (const SimError&) {
            // reported as a mismatch below
        }
        if (oracle != *rec.finish)
            out.push_back({rec.key, *rec.finish, oracle});
    }
    return out;
}

std::vector<SegmentKey> check_work_conserving(const Schedule& sched, const PriorityOrder& order) {
    auto ranks = order.aligned(sched.instances);
    Timeline tl(sched, ranks);
    std::vector<SegmentKey> out;
    for (std::size_t i = 0; i < sched.segments.size(); ++i) {
        const auto& rec = sched.segments[i];
        if (!rec.completed())
            continue;
        const Tick r = *rec.release;
        const Tick f = *rec.finish;
        // Higher-ranked execution plus own execution must cover [r, f).
        Tick covered = tl.higher_ranked_time(ranks[i], r, f) + rec.executed();
        if (covered != f - r)
            out.push_back(rec.key);
    }
    return out;
}

bool check_uniprocessor(const Schedule& sched) {
    std::vector<Interval> all;
    for (const auto& rec : sched.segments) {
        Tick prev_end = 0;
        for (const auto& iv : rec.intervals) {
            if (iv.begin >= iv.end || iv.begin < prev_end)
                return false;
            if (!rec.start || iv.begin < *rec.start)
                return false;
            if (rec.finish && iv.end > *rec.finish)
                return false;
            if (rec.release && iv.begin < *rec.release)
                return false;
            prev_end = iv.end;
            all.push_back(iv);
        }
    }
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].begin < all[i - 1].end)
            return false;
    return true;
}

std::vector<SegmentKey> check_interference_lower_bound(const Schedule& sched, const PriorityOrder& order) {
    auto ranks = order.aligned(sched.instances);
    Timeline tl(sched, ranks);

    // Completed segments sorted by finish with a prefix sum of executed time.
    std::vector<std::pair<Tick, Tick>> by_finish;
    for (const auto& rec : sched.segments)
        if (rec.completed())
            by_finish.emplace_back(*rec.finish, rec.executed());
    std::sort(by_finish.begin(), by_finish.end());
    std::vector<Tick> prefix(by_finish.size() + 1, 0);
    for (std::size_t i = 0; i < by_finish.size(); ++i)
        prefix[i + 1] = prefix[i] + by_finish[i].second;
    auto upto = [&](Tick v) {  // number of finishes <= v
        return static_cast<std::size_t>(
            std::upper_bound(by_finish.begin(), by_finish.end(), std::pair<Tick, Tick>{v, kInfinity}) -
            by_finish.begin());
    };
    auto below = [&](Tick v) {  // number of finishes < v
        return static_cast<std::size_t>(
            std::lower_bound(by_finish.begin(), by_finish.end(), std::pair<Tick, Tick>{v, 0}) - by_finish.begin());
    };

    std::vector<SegmentKey> out;
    for (std::size_t i = 0; i < sched.segments.size(); ++i) {
        const auto& rec = sched.segments[i];
        if (!rec.completed())
            continue;
        const Tick s = *rec.start;
        const Tick f = *rec.finish;
        Tick bound = prefix[below(f)] - prefix[upto(s)];
        if (tl.higher_ranked_time(ranks[i], s, f) < bound)
            out.push_back(rec.key);
    }
    return out;
}

}  // namespace segsched
