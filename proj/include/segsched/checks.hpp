#pragma once

#include <vector>

#include "segsched/simcore.hpp"

namespace segsched {

// Schedule-level invariants. Each returns the offending segments (empty
// means the property holds).

struct OracleMismatch {
    SegmentKey key;
    Tick recorded = 0;
    Tick oracle = 0;
};

// Recorded finish vs. fixed-point finish for every completed segment.
std::vector<OracleMismatch> check_oracle_equivalence(const Schedule& sched, const PriorityOrder& order);

// Inside [release, finish) of every completed segment, the segment itself or
// a higher-ranked one is always executing.
std::vector<SegmentKey> check_work_conserving(const Schedule& sched, const PriorityOrder& order);

// Execution intervals of all segments are pairwise disjoint, and each
// segment's intervals lie within [start, finish).
bool check_uniprocessor(const Schedule& sched);

// For every completed segment g of a nominal schedule:
//   W_g(start, finish) >= sum of C_w over w with start < finish_w < finish.
std::vector<SegmentKey> check_interference_lower_bound(const Schedule& sched, const PriorityOrder& order);

}  // namespace segsched
