#pragma once

#include <string>
#include <vector>

#include "segsched/behavior.hpp"

namespace segsched::scenarios {

// Small hand-built systems with hand-picked runtime draws. Task ids are
// 1 and 2; task 1 has the higher priority wherever the policy ties.

// ((3,2,2), T=D=10) and ((2,2,2), T=D=11); integer ticks.
TaskSet two_task_nominal();

// ((3,2,2)) and ((2,2,2)), T=D=10, at 10 ticks per unit. Online draw: task 1
// suspends 1.5 instead of 2.
TaskSet early_suspension();
std::vector<SegmentDraw> early_suspension_draws();

// Task 1: jitter 2, (1,2,3); task 2: jitter 1, (3,3,1.6); T=D=10, at 10
// ticks per unit. Online draw: task 1 jitter 1, task 2 last segment runs 1.
TaskSet jitter_anomaly();
std::vector<SegmentDraw> jitter_anomaly_draws();

// ((3,2,2)) and ((2,1,2)), T=D=10, at 10 ticks per unit. Online draw: every
// segment runs 1, task 1 suspends 1, task 2 suspends 0.5.
TaskSet average_case();
std::vector<SegmentDraw> average_case_draws();

// Task 1 ((3,5,3), T=12) above task 2 ((1), T=6) under task-level fixed
// priority. Online draw: task 1's first segment runs 1 and suspends 4.
TaskSet working_example();
Policy working_example_policy();
std::vector<SegmentDraw> working_example_draws();

struct Scenario {
    std::string name;
    TaskSet taskset;
    Policy policy;
    std::vector<SegmentDraw> draws;
};

// Figure numbers 1, 2, 3, 5 and 8 map onto the scenarios above. Throws
// ModelError for any other number.
Scenario by_figure(int figure);

}  // namespace segsched::scenarios
