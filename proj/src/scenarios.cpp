#include "segsched/scenarios.hpp"

namespace segsched::scenarios {

namespace {

SuspendingTask make_task(TaskId id, Tick period, Tick jitter, std::vector<Tick> execs, std::vector<Tick> susps) {
    SuspendingTask t;
    t.id = id;
    t.period = period;
    t.deadline = period;
    t.jitter_max = jitter;
    t.execs = std::move(execs);
    t.susps = std::move(susps);
    return t;
}

}  // namespace

TaskSet two_task_nominal() {
    return {1, {make_task(1, 10, 0, {3, 2}, {2}), make_task(2, 11, 0, {2, 2}, {2})}};
}

TaskSet early_suspension() {
    return {10, {make_task(1, 100, 0, {30, 20}, {20}), make_task(2, 100, 0, {20, 20}, {20})}};
}

std::vector<SegmentDraw> early_suspension_draws() { return {{{1, 0, 1}, 20, 15}}; }

TaskSet jitter_anomaly() {
    return {10, {make_task(1, 100, 20, {10, 30}, {20}), make_task(2, 100, 10, {30, 16}, {30})}};
}

std::vector<SegmentDraw> jitter_anomaly_draws() { return {{{1, 0, 0}, 10, 10}, {{2, 0, 1}, 10, 30}}; }

TaskSet average_case() {
    return {10, {make_task(1, 100, 0, {30, 20}, {20}), make_task(2, 100, 0, {20, 20}, {10})}};
}

std::vector<SegmentDraw> average_case_draws() {
    return {{{1, 0, 0}, 10, 0}, {{1, 0, 1}, 10, 10}, {{2, 0, 0}, 10, 0}, {{2, 0, 1}, 10, 5}};
}

TaskSet working_example() { return {1, {make_task(1, 12, 0, {3, 3}, {5}), make_task(2, 6, 0, {1}, {})}}; }

Policy working_example_policy() {
    auto ts = working_example();
    const TaskId order[] = {1, 2};
    return Policy::explicit_order(task_level_order(ts, order, hyperperiod(ts)));
}

std::vector<SegmentDraw> working_example_draws() { return {{{1, 0, 0}, 1, 0}, {{1, 0, 1}, 3, 4}}; }

Scenario by_figure(int figure) {
    switch (figure) {
    case 1:
        return {"early suspension", early_suspension(), Policy::rm(), early_suspension_draws()};
    case 2:
        return {"jitter anomaly", jitter_anomaly(), Policy::rm(), jitter_anomaly_draws()};
    case 3:
        return {"two-task nominal", two_task_nominal(), Policy::rm(), {}};
    case 5:
        return {"average case", average_case(), Policy::rm(), average_case_draws()};
    case 8:
        return {"working example", working_example(), working_example_policy(), working_example_draws()};
    default:
        throw ModelError("no scenario for figure " + std::to_string(figure) + " (1, 2, 3, 5, 8)");
    }
}

}  // namespace segsched::scenarios
