#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segsched/model.hpp"

namespace segsched {

enum class SuspensionClass { Short, Medium, Long };
enum class JitterClass { None, Minor, Mild, Serious };

// Total suspension as a fraction of (T - C).
std::pair<double, double> suspension_range(SuspensionClass c);
// Maximum jitter as a fraction of the reference (smallest) period.
std::pair<double, double> jitter_range(JitterClass c);

std::string to_string(SuspensionClass c);
std::string to_string(JitterClass c);
SuspensionClass parse_suspension_class(const std::string& s);
JitterClass parse_jitter_class(const std::string& s);

struct GenConfig {
    double total_utilization = 0.5;
    std::size_t n_tasks = 10;
    std::size_t segments_per_task = 5;  // 2 rare, 5 moderate, 8 frequent
    SuspensionClass suspension = SuspensionClass::Medium;
    JitterClass jitter = JitterClass::None;
    std::vector<Tick> period_menu = {1, 2, 5, 10, 20, 50, 100, 200, 1000};  // model time units
    Tick tick_scale = 1000;
    double deadline_ratio = 1.0;  // D = ratio * T, ratio in (0, 1]
};

// Throws ModelError describing the first invalid field.
void validate_config(const GenConfig& cfg);

// n non-negative tick values summing exactly to `total` with
// lowers[i] <= v[i] <= uppers[i]. A flat Dirichlet draw of the free mass is
// clamped to the bounds with the overshoot redistributed until no bound is
// violated, then rounded by largest remainder. Throws ModelError when the
// bounds cannot be met.
std::vector<Tick> drs_split(std::size_t n, Tick total, std::span<const Tick> lowers, std::span<const Tick> uppers,
                            std::uint64_t seed);

// Random task set per the configuration; deterministic in (cfg, seed).
TaskSet generate_taskset(const GenConfig& cfg, std::uint64_t seed);

}  // namespace segsched
