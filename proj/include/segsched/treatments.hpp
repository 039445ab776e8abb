#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "segsched/simcore.hpp"

namespace segsched {

// Offline artifacts derived from the worst-case schedule: the nominal
// release of every segment (floors for release enforcement) and the
// preference order (earlier nominal finish = higher preference).
struct NominalPlan {
    TaskSet taskset;
    Policy policy;
    Tick horizon = 0;
    PriorityOrder order;  // original segment priorities
    Schedule nominal;
    std::vector<std::pair<SegmentKey, Tick>> release_floors;
    PriorityOrder preference;
    bool feasible = false;
};

// Worst-case simulation under `policy` over `horizon` (default: hyperperiod).
// Infeasibility is reported through `feasible`, not thrown.
NominalPlan build_nominal(const TaskSet& ts, const Policy& policy, std::optional<Tick> horizon = std::nullopt);

struct JobMiss {
    TaskId task = 0;
    std::uint64_t job = 0;
    Tick deadline = 0;
    std::optional<Tick> finish;  // empty: did not complete within the horizon
};

struct Verdict {
    std::optional<NominalPlan> plan;  // set when schedulable
    std::optional<JobMiss> miss;      // first violating job otherwise

    bool schedulable() const { return plan.has_value(); }
};

// Earliest-deadline job that misses in `plan`, if any.
std::optional<JobMiss> first_miss(const NominalPlan& plan);

// One-hyperperiod exact test for synchronous constrained-deadline sets.
// Throws ModelError for non-synchronous sets or on hyperperiod overflow.
Verdict exact_schedulability(const TaskSet& ts, const Policy& policy);

// First feasible plan over `policies` in order; nullopt when none is.
std::optional<NominalPlan> comb(const TaskSet& ts, const std::vector<Policy>& policies = {Policy::edf(), Policy::rm()});

}  // namespace segsched
