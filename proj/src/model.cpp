#include "segsched/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace segsched {

Tick SuspendingTask::total_exec() const { return std::accumulate(execs.begin(), execs.end(), Tick{0}); }

Tick SuspendingTask::total_susp() const { return std::accumulate(susps.begin(), susps.end(), Tick{0}); }

const SuspendingTask& TaskSet::task(TaskId id) const {
    for (const auto& t : tasks)
        if (t.id == id)
            return t;
    throw ModelError("unknown task id " + std::to_string(id));
}

bool TaskSet::synchronous() const {
    return std::all_of(tasks.begin(), tasks.end(), [](const SuspendingTask& t) { return t.first_release == 0; });
}

std::string to_string(const SegmentKey& key) {
    return "(task " + std::to_string(key.task) + ", job " + std::to_string(key.job) + ", seg " +
           std::to_string(key.seg) + ")";
}

std::vector<Violation> validate_taskset(const TaskSet& ts) {
    std::vector<Violation> out;
    if (ts.tick_scale == 0)
        out.push_back({0, "tick_scale must be >= 1"});
    if (ts.tasks.empty())
        out.push_back({0, "task set must not be empty"});

    std::set<TaskId> seen;
    for (const auto& t : ts.tasks) {
        auto add = [&](std::string msg) { out.push_back({t.id, std::move(msg)}); };
        if (!seen.insert(t.id).second)
            add("duplicate task id");
        if (t.period == 0)
            add("period must be > 0");
        if (t.deadline == 0)
            add("deadline must be > 0");
        if (t.deadline > t.period)
            add("constrained deadline required (deadline <= period)");
        if (t.execs.empty())
            add("at least one computation segment required");
        if (!t.execs.empty() && t.susps.size() + 1 != t.execs.size())
            add("susps must have exactly len(execs) - 1 entries");
        for (Tick c : t.execs)
            if (c < 1) {
                add("execution time must be >= 1 tick");
                break;
            }
        for (Tick s : t.susps)
            if (s < 1) {
                add("suspension must be >= 1 tick");
                break;
            }
    }
    return out;
}

void require_valid(const TaskSet& ts) {
    auto violations = validate_taskset(ts);
    if (violations.empty())
        return;
    std::string msg = "invalid task set:";
    for (const auto& v : violations)
        msg += " [task " + std::to_string(v.task) + ": " + v.message + "]";
    throw ModelError(msg);
}

Tick hyperperiod(const TaskSet& ts) {
    if (ts.tasks.empty())
        throw ModelError("hyperperiod of an empty task set");
    Tick h = 1;
    for (const auto& t : ts.tasks) {
        if (t.period == 0)
            throw ModelError("hyperperiod: zero period");
        Tick g = std::gcd(h, t.period);
        Tick factor = t.period / g;
        if (h > kInfinity / factor)
            throw ModelError("hyperperiod overflows the tick type");
        h *= factor;
    }
    return h;
}

std::vector<SegmentInstance> expand_jobs(const TaskSet& ts, Tick horizon) {
    std::vector<SegmentInstance> out;
    for (const auto& t : ts.tasks) {
        if (t.period == 0)
            continue;
        for (std::uint64_t k = 0;; ++k) {
            Tick r = t.release_of(k);
            if (r >= horizon)
                break;
            const auto m = static_cast<std::uint32_t>(t.execs.size());
            for (std::uint32_t j = 0; j < m; ++j) {
                SegmentInstance inst;
                inst.key = {t.id, k, j};
                inst.wcet = t.execs[j];
                inst.max_susp_before = j == 0 ? t.jitter_max : t.susps[j - 1];
                inst.job_release = r;
                inst.job_deadline = r + t.deadline;
                inst.last_in_job = j + 1 == m;
                out.push_back(inst);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const SegmentInstance& a, const SegmentInstance& b) {
        if (a.job_release != b.job_release)
            return a.job_release < b.job_release;
        if (a.key.task != b.key.task)
            return a.key.task < b.key.task;
        return a.key.seg < b.key.seg;
    });
    return out;
}

SegmentIndex::SegmentIndex(const std::vector<SegmentInstance>& instances) {
    sorted_.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        sorted_.emplace_back(instances[i].key, i);
    std::sort(sorted_.begin(), sorted_.end());
}

std::size_t SegmentIndex::find(const SegmentKey& key) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), key,
                               [](const auto& e, const SegmentKey& k) { return e.first < k; });
    if (it == sorted_.end() || it->first != key)
        return npos;
    return it->second;
}

std::size_t SegmentIndex::at(const SegmentKey& key) const {
    auto i = find(key);
    if (i == npos)
        throw ModelError("segment " + to_string(key) + " is not part of the horizon");
    return i;
}

}  // namespace segsched
