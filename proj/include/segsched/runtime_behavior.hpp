#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "segsched/model.hpp"

namespace segsched {

// Actual execution time of a segment and the actual suspension preceding
// it. For seg 0 the suspension is the job's actual release jitter.
struct SegmentDraw {
    SegmentKey key;
    Tick exec = 0;
    Tick susp_before = 0;
};

struct RuntimeBehavior {
    std::vector<SegmentDraw> draws;
    std::uint64_t seed = 0;
    std::string provenance;
};

// C = WCET, S = maximum suspension, jitter = jitter_max for every instance.
RuntimeBehavior worst_case_behavior(const TaskSet& ts, Tick horizon);

}  // namespace segsched
