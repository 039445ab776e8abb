#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segsched/runtime_behavior.hpp"
#include "segsched/treatments.hpp"

namespace segsched {

// Lower bounds of the uniform runtime draws, as fractions of the maximum.
struct BehaviorProfile {
    double exec_floor = 1.0;
    double susp_floor = 1.0;
};

// Seeded uniform draws for every instance in [0, horizon):
//   exec   in [max(1, ceil(exec_floor * C)), C]
//   susp   in [max(1, ceil(susp_floor * S)), S]   for seg > 0
//   jitter in [0, jitter_max]                    for seg 0, per job
RuntimeBehavior sample_behavior(const TaskSet& ts, Tick horizon, const BehaviorProfile& profile, std::uint64_t seed);

// Worst-case draws except for the listed segments. Throws ModelError for an
// override outside the horizon.
RuntimeBehavior replay_behavior(const TaskSet& ts, Tick horizon, std::span<const SegmentDraw> overrides);

// Instance-wise bound check; returns a description of the first violation.
std::optional<std::string> behavior_out_of_bounds(const TaskSet& ts, Tick horizon, const RuntimeBehavior& b);

enum class OnlineMode { Untreated, Enforce, Preference };

const char* to_string(OnlineMode mode);

// Online schedule of `plan` under `behavior`:
//   Untreated  original priorities, natural releases
//   Enforce    original priorities, releases held to the nominal release
//   Preference nominal-finish preference order, natural releases
Schedule run_online(const NominalPlan& plan, const RuntimeBehavior& behavior, OnlineMode mode);

// Priority order the online run of `mode` schedules with.
const PriorityOrder& order_for(const NominalPlan& plan, OnlineMode mode);

struct FinishViolation {
    SegmentKey key;
    Tick nominal_finish = 0;
    std::optional<Tick> online_finish;  // empty: unfinished online
};

struct AnomalyReport {
    std::vector<FinishViolation> violations;
    bool anomaly_free = true;
};

// Segment-wise comparison of online against nominal finishing times.
AnomalyReport check_anomaly_free(const NominalPlan& plan, const Schedule& online);

struct Witness {
    std::uint64_t trial = 0;
    RuntimeBehavior behavior;
    AnomalyReport report;
};

// Untreated online runs of the `policy` plan under `trials` sampled
// behaviors; returns the lowest-index trial that shows an anomaly. Throws
// ModelError when the plan is infeasible.
std::optional<Witness> anomaly_search(const TaskSet& ts, const Policy& policy, std::uint64_t trials,
                                      std::uint64_t seed, const BehaviorProfile& profile);

}  // namespace segsched
