#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace segsched {

// All time values are integer ticks; tick_scale says how many ticks make one
// model time unit.
using Tick = std::uint64_t;
using TaskId = std::uint32_t;

inline constexpr Tick kInfinity = std::numeric_limits<Tick>::max();

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Periodic segmented self-suspending task with release jitter.
//
// A job released at r executes, in order:
//   leading suspension (jitter) of at most jitter_max,
//   execs[0], susps[0], execs[1], ..., susps[M-2], execs[M-1].
// Releases are first_release + k * period.
struct SuspendingTask {
    TaskId id = 0;
    Tick period = 0;
    Tick deadline = 0;
    Tick jitter_max = 0;
    Tick first_release = 0;
    std::vector<Tick> execs;
    std::vector<Tick> susps;

    std::size_t segment_count() const { return execs.size(); }
    Tick total_exec() const;
    Tick total_susp() const;
    Tick release_of(std::uint64_t job) const { return first_release + job * period; }
};

struct TaskSet {
    Tick tick_scale = 1;
    std::vector<SuspendingTask> tasks;

    const SuspendingTask& task(TaskId id) const;
    bool synchronous() const;
};

// Identity of one computation segment of one job.
struct SegmentKey {
    TaskId task = 0;
    std::uint64_t job = 0;
    std::uint32_t seg = 0;

    auto operator<=>(const SegmentKey&) const = default;
};

std::string to_string(const SegmentKey& key);

struct SegmentInstance {
    SegmentKey key;
    Tick wcet = 0;
    // Maximum suspension preceding this segment: jitter_max for seg 0.
    Tick max_susp_before = 0;
    Tick job_release = 0;
    Tick job_deadline = 0;
    bool last_in_job = false;
};

struct Violation {
    TaskId task = 0;
    std::string message;
};

// Every violated invariant of every task; empty when the set is valid.
std::vector<Violation> validate_taskset(const TaskSet& ts);

// Throws ModelError listing the violations when the set is invalid.
void require_valid(const TaskSet& ts);

// Least common multiple of all periods. Throws ModelError on overflow.
Tick hyperperiod(const TaskSet& ts);

// One instance per segment of every job released strictly before horizon,
// ordered by (job release, task id, segment index).
std::vector<SegmentInstance> expand_jobs(const TaskSet& ts, Tick horizon);

// Lookup from SegmentKey to position in an expanded instance list.
class SegmentIndex {
public:
    SegmentIndex() = default;
    explicit SegmentIndex(const std::vector<SegmentInstance>& instances);

    // Returns npos when the key is absent.
    std::size_t find(const SegmentKey& key) const;
    std::size_t at(const SegmentKey& key) const;
    std::size_t size() const { return sorted_.size(); }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

private:
    std::vector<std::pair<SegmentKey, std::size_t>> sorted_;
};

}  // namespace segsched
