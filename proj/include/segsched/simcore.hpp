#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segsched/model.hpp"
#include "segsched/runtime_behavior.hpp"

namespace segsched {

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Half-open tick interval [begin, end).
struct Interval {
    Tick begin = 0;
    Tick end = 0;

    Tick length() const { return end - begin; }
    bool operator==(const Interval&) const = default;
};

// Total length of ordered, pairwise disjoint intervals. Throws SimError if
// the input overlaps or is out of order.
Tick measure(std::span<const Interval> intervals);

// Total strict order over segment instances; rank 0 is the highest priority
// (or preference).
class PriorityOrder {
public:
    PriorityOrder() = default;

    // Throws SimError on duplicate keys or duplicate ranks.
    explicit PriorityOrder(std::vector<std::pair<SegmentKey, std::uint64_t>> ranks);

    // Ranks 0..n-1 in the given order.
    static PriorityOrder from_sequence(std::span<const SegmentKey> highest_first);

    std::optional<std::uint64_t> find(const SegmentKey& key) const;
    std::uint64_t rank(const SegmentKey& key) const;
    std::size_t size() const { return by_key_.size(); }
    bool empty() const { return by_key_.empty(); }

    std::vector<SegmentKey> highest_first() const;
    const std::vector<std::pair<SegmentKey, std::uint64_t>>& entries() const { return by_key_; }

    // Rank for each instance, aligned with the instance list. Throws SimError
    // naming the first instance the order does not cover.
    std::vector<std::uint64_t> aligned(std::span<const SegmentInstance> instances) const;

    bool operator==(const PriorityOrder&) const = default;

private:
    std::vector<std::pair<SegmentKey, std::uint64_t>> by_key_;
};

enum class PolicyKind { RM, EDF, Explicit };

struct Policy {
    PolicyKind kind = PolicyKind::RM;
    PriorityOrder order;  // only for Explicit

    static Policy rm() { return {PolicyKind::RM, {}}; }
    static Policy edf() { return {PolicyKind::EDF, {}}; }
    static Policy explicit_order(PriorityOrder o) { return {PolicyKind::Explicit, std::move(o)}; }

    std::string name() const;
};

// RM: (period, task, job, seg). EDF: (absolute deadline, task, job, seg).
// Explicit: passed through after checking it covers every instance.
PriorityOrder assign_priorities(const TaskSet& ts, const Policy& policy, Tick horizon);

// Task-level fixed priority: every segment of tasks_highest_first[i] ranks
// above every segment of tasks_highest_first[i+1]; ties by (job, seg).
PriorityOrder task_level_order(const TaskSet& ts, std::span<const TaskId> tasks_highest_first, Tick horizon);

// Natural: releases as in the nominal/online definitions. Enforced: a segment
// is additionally held back until its floor (its nominal release).
struct ReleaseRule {
    enum class Mode { Natural, Enforced } mode = Mode::Natural;
    std::vector<std::pair<SegmentKey, Tick>> floors;

    static ReleaseRule natural() { return {}; }
    static ReleaseRule enforced(std::vector<std::pair<SegmentKey, Tick>> floors) {
        return {Mode::Enforced, std::move(floors)};
    }
};

struct SegmentRecord {
    SegmentKey key;
    std::optional<Tick> release;
    std::optional<Tick> start;
    std::optional<Tick> finish;  // empty: not completed within the horizon
    std::vector<Interval> intervals;

    bool completed() const { return finish.has_value(); }
    Tick executed() const;
};

struct Schedule {
    Tick horizon = 0;
    bool nominal = true;
    std::vector<SegmentInstance> instances;
    std::vector<SegmentRecord> segments;  // aligned with instances
    SegmentIndex index;

    const SegmentRecord& at(const SegmentKey& key) const { return segments[index.at(key)]; }
    bool all_completed() const;
};

// Worst case: WCET, maximum suspension, maximum jitter for every segment.
struct WorstCase {};

// Event-driven preemptive segment-level fixed-priority simulation of the
// jobs released in [0, horizon), cut off at `run_until` (default: horizon;
// kInfinity runs every job to completion). At each instant completions are
// handled first, then releases, then the ready segment with the smallest
// rank is dispatched. A behavior not covering every instance is a SimError.
Schedule simulate(const TaskSet& ts, const PriorityOrder& order, WorstCase, const ReleaseRule& rule, Tick horizon,
                  std::optional<Tick> run_until = std::nullopt);
Schedule simulate(const TaskSet& ts, const PriorityOrder& order, const RuntimeBehavior& behavior,
                  const ReleaseRule& rule, Tick horizon, std::optional<Tick> run_until = std::nullopt);

// Time in window [a, b) during which segments ranked above `key` execute.
Tick interference(const Schedule& sched, const PriorityOrder& order, const SegmentKey& key, Interval window);

// Smallest t >= r + W(r, t) + C, found by iterating from r + C. Uses only the
// recorded execution of other segments, so it checks the simulator's finish.
Tick fixed_point_finish(const Schedule& sched, const PriorityOrder& order, const SegmentKey& key);

// Per-schedule index of execution intervals with owner ranks, for batch
// interference queries.
class Timeline {
public:
    Timeline(const Schedule& sched, std::span<const std::uint64_t> ranks);

    // Time in [a, b) during which segments with rank < `rank` execute.
    Tick higher_ranked_time(std::uint64_t rank, Tick a, Tick b) const;

    // Fixed-point finish of a segment with the given rank, release and demand.
    Tick fixed_point(std::uint64_t rank, Tick release, Tick demand) const;

    // Total executed time across all slices.
    Tick busy_time() const { return busy_; }

private:
    struct Slice {
        Tick begin;
        Tick end;
        std::uint64_t rank;
    };
    std::vector<Slice> slices_;
    Tick busy_ = 0;
};

}  // namespace segsched
