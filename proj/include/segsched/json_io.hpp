#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "segsched/behavior.hpp"
#include "segsched/simcore.hpp"
#include "segsched/treatments.hpp"

namespace segsched {

// Task set: {"tick_scale", "tasks": [{"id", "period", "deadline",
// "jitter_max", "first_release", "execs", "susps"}]}.
nlohmann::json to_json(const TaskSet& ts);
// Throws ModelError listing the violations of an invalid set.
TaskSet taskset_from_json(const nlohmann::json& j);

// Schedule: array of {"task", "job", "seg", "release", "start", "finish",
// "intervals": [[a, b], ...]}; null marks an unset time.
nlohmann::json to_json(const Schedule& sched);

nlohmann::json to_json(const PriorityOrder& order);
PriorityOrder order_from_json(const nlohmann::json& j);

// Plan: taskset, policy name, horizon, feasibility, nominal schedule, release
// floors and preference ranks. Loading rebuilds the nominal schedule and
// rejects files whose floors or preference disagree with it.
nlohmann::json to_json(const NominalPlan& plan);
NominalPlan plan_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RuntimeBehavior& b);
RuntimeBehavior behavior_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AnomalyReport& report);
nlohmann::json to_json(const Witness& w);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace segsched
