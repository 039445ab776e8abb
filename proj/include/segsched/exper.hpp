#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "segsched/synth.hpp"

namespace segsched {

// NOM-* variants ignore release jitter when building the nominal schedule;
// the -JT variants use the maximum jitter. COMB accepts a set when EDF or RM
// accepts it.
enum class Algorithm { NomEdf, NomRm, Comb, NomEdfJt, NomRmJt, CombJt };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct SweepSpec {
    std::vector<double> utilizations;  // strictly increasing within [0, 1]
    std::size_t sets_per_point = 20;
    GenConfig base;
    std::vector<Algorithm> algorithms = {Algorithm::NomEdf, Algorithm::NomRm, Algorithm::Comb};
    std::uint64_t master_seed = 1;
    unsigned workers = 0;  // 0: hardware concurrency
};

// 0.00, 0.05, ..., 1.00
std::vector<double> default_grid();

void validate_spec(const SweepSpec& spec);

struct SweepRow {
    double utilization = 0.0;
    std::string algorithm;
    std::size_t accepted = 0;
    std::size_t total = 0;
    double ratio = 0.0;

    bool operator==(const SweepRow&) const = default;
};

// One generated set: its seed and which algorithms accepted it (parallel to
// the spec's algorithm list). generation_failed sets count as rejected.
struct SetRecord {
    std::size_t point = 0;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool generation_failed = false;
    std::vector<bool> accepted;

    bool operator==(const SetRecord&) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (utilization, algorithm name)
    std::vector<SetRecord> sets;
    std::vector<std::string> log;

    bool operator==(const SweepResult&) const = default;
};

// Seed of set `index` at grid point `point`; shared by all algorithms.
std::uint64_t set_seed(std::uint64_t master_seed, std::size_t point, std::size_t index);

// Acceptance of one generated set under each algorithm.
std::vector<bool> evaluate_set(const TaskSet& ts, const std::vector<Algorithm>& algorithms);

SweepResult acceptance_curve(const SweepSpec& spec);

enum class ResultFormat { Csv, Json };

std::string to_csv(const SweepResult& res);
std::string to_json_text(const SweepResult& res);
SweepResult sweep_from_json_text(const std::string& text);

// Writes the result; I/O failures throw std::runtime_error naming the path.
void emit_results(const SweepResult& res, ResultFormat format, const std::filesystem::path& path);

}  // namespace segsched
