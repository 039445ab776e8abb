#include "segsched/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace segsched {

std::pair<double, double> suspension_range(SuspensionClass c) {
    switch (c) {
    case SuspensionClass::Short:
        return {0.01, 0.1};
    case SuspensionClass::Medium:
        return {0.1, 0.3};
    case SuspensionClass::Long:
        return {0.3, 0.6};
    }
    return {0.0, 0.0};
}

std::pair<double, double> jitter_range(JitterClass c) {
    switch (c) {
    case JitterClass::None:
        return {0.0, 0.0};
    case JitterClass::Minor:
        return {0.01, 0.1};
    case JitterClass::Mild:
        return {0.1, 0.2};
    case JitterClass::Serious:
        return {0.2, 0.3};
    }
    return {0.0, 0.0};
}

std::string to_string(SuspensionClass c) {
    switch (c) {
    case SuspensionClass::Short:
        return "short";
    case SuspensionClass::Medium:
        return "medium";
    case SuspensionClass::Long:
        return "long";
    }
    return "?";
}

std::string to_string(JitterClass c) {
    switch (c) {
    case JitterClass::None:
        return "none";
    case JitterClass::Minor:
        return "minor";
    case JitterClass::Mild:
        return "mild";
    case JitterClass::Serious:
        return "serious";
    }
    return "?";
}

SuspensionClass parse_suspension_class(const std::string& s) {
    for (auto c : {SuspensionClass::Short, SuspensionClass::Medium, SuspensionClass::Long})
        if (to_string(c) == s)
            return c;
    throw ModelError("unknown suspension class '" + s + "' (short|medium|long)");
}

JitterClass parse_jitter_class(const std::string& s) {
    for (auto c : {JitterClass::None, JitterClass::Minor, JitterClass::Mild, JitterClass::Serious})
        if (to_string(c) == s)
            return c;
    throw ModelError("unknown jitter class '" + s + "' (none|minor|mild|serious)");
}

void validate_config(const GenConfig& cfg) {
    if (!(cfg.total_utilization >= 0.0 && cfg.total_utilization <= 1.0))
        throw ModelError("total utilization must lie in [0, 1]");
    if (cfg.n_tasks == 0)
        throw ModelError("at least one task required");
    if (cfg.segments_per_task == 0)
        throw ModelError("at least one segment per task required");
    if (cfg.period_menu.empty() || std::find(cfg.period_menu.begin(), cfg.period_menu.end(), Tick{0}) !=
                                       cfg.period_menu.end())
        throw ModelError("period menu must be non-empty and positive");
    if (cfg.tick_scale == 0)
        throw ModelError("tick scale must be >= 1");
    if (!(cfg.deadline_ratio > 0.0 && cfg.deadline_ratio <= 1.0))
        throw ModelError("deadline ratio must lie in (0, 1]");
}

std::vector<Tick> drs_split(std::size_t n, Tick total, std::span<const Tick> lowers, std::span<const Tick> uppers,
                            std::uint64_t seed) {
    if (n == 0 || lowers.size() != n || uppers.size() != n)
        throw ModelError("drs_split: need n >= 1 and n lower/upper bounds");
    Tick lo_sum = 0;
    Tick hi_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (lowers[i] > uppers[i])
            throw ModelError("drs_split: lower bound above upper bound");
        lo_sum += lowers[i];
        hi_sum += uppers[i];
    }
    if (total < lo_sum || total > hi_sum)
        throw ModelError("drs_split: total " + std::to_string(total) + " outside [" + std::to_string(lo_sum) + ", " +
                         std::to_string(hi_sum) + "]");

    const double free = static_cast<double>(total - lo_sum);
    std::vector<double> cap(n);
    for (std::size_t i = 0; i < n; ++i)
        cap[i] = static_cast<double>(uppers[i] - lowers[i]);

    // Flat Dirichlet via normalised exponentials.
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(n);
    for (auto& v : x)
        v = expo(rng);
    const double esum = std::accumulate(x.begin(), x.end(), 0.0);
    for (auto& v : x)
        v = esum > 0.0 ? free * v / esum : free / static_cast<double>(n);

    // Clamp and redistribute the overshoot over the unclamped components.
    std::vector<bool> pinned(n, false);
    for (std::size_t round = 0; round <= n; ++round) {
        double excess = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!pinned[i] && x[i] > cap[i]) {
                excess += x[i] - cap[i];
                x[i] = cap[i];
                pinned[i] = true;
            }
        if (excess <= 0.0)
            break;
        double weight = 0.0;
        std::size_t open = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!pinned[i]) {
                weight += x[i];
                ++open;
            }
        if (open == 0)
            break;
        for (std::size_t i = 0; i < n; ++i)
            if (!pinned[i])
                x[i] += weight > 0.0 ? excess * x[i] / weight : excess / static_cast<double>(open);
    }

    // Largest-remainder rounding that keeps the sum and the bounds.
    std::vector<Tick> out(n);
    std::vector<std::pair<double, std::size_t>> rem;
    Tick assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::clamp(x[i], 0.0, cap[i]);
        auto whole = static_cast<Tick>(std::floor(v));
        out[i] = lowers[i] + whole;
        assigned += out[i];
        rem.emplace_back(v - std::floor(v), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    // Floating error can leave the leftover off by a unit either way.
    while (assigned < total) {
        bool moved = false;
        for (const auto& [r, i] : rem) {
            if (assigned == total)
                break;
            if (out[i] < uppers[i]) {
                ++out[i];
                ++assigned;
                moved = true;
            }
        }
        if (!moved)
            throw ModelError("drs_split: rounding could not reach the total");
    }
    while (assigned > total) {
        bool moved = false;
        for (auto it = rem.rbegin(); it != rem.rend(); ++it) {
            if (assigned == total)
                break;
            if (out[it->second] > lowers[it->second]) {
                --out[it->second];
                --assigned;
                moved = true;
            }
        }
        if (!moved)
            throw ModelError("drs_split: rounding could not reach the total");
    }
    return out;
}

namespace {

constexpr int kRetryCap = 100;

Tick scaled_draw(std::mt19937_64& rng, std::pair<double, double> range, Tick base) {
    double f = std::uniform_real_distribution<double>(range.first, range.second)(rng);
    return static_cast<Tick>(std::llround(f * static_cast<double>(base)));
}

}  // namespace

TaskSet generate_taskset(const GenConfig& cfg, std::uint64_t seed) {
    validate_config(cfg);
    std::mt19937_64 rng(seed);
    const std::size_t n = cfg.n_tasks;
    const Tick m = cfg.segments_per_task;
    const Tick scale = cfg.tick_scale;
    // Utilization is split in quanta of 1/scale, so C = quanta * T_units ticks.
    const auto total_quanta = static_cast<Tick>(std::llround(cfg.total_utilization * static_cast<double>(scale)));

    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<Tick> period_units(n);
        std::uniform_int_distribution<std::size_t> pick(0, cfg.period_menu.size() - 1);
        for (auto& p : period_units)
            p = cfg.period_menu[pick(rng)];

        // Reserve enough utilization for one tick per segment when the total
        // allows it; otherwise tiny tasks get bumped to m ticks below.
        std::vector<Tick> lowers(n), uppers(n, scale);
        for (std::size_t i = 0; i < n; ++i)
            lowers[i] = (m + period_units[i] - 1) / period_units[i];
        if (std::accumulate(lowers.begin(), lowers.end(), Tick{0}) > total_quanta)
            std::fill(lowers.begin(), lowers.end(), Tick{0});
        for (std::size_t i = 0; i < n; ++i)
            uppers[i] = std::max(lowers[i], std::min(scale, total_quanta));
        auto quanta = drs_split(n, total_quanta, lowers, uppers, rng());

        TaskSet ts;
        ts.tick_scale = scale;
        bool too_heavy = false;
        for (std::size_t i = 0; i < n; ++i) {
            SuspendingTask t;
            t.id = static_cast<TaskId>(i + 1);
            t.period = period_units[i] * scale;
            Tick c = std::max(m, quanta[i] * period_units[i]);
            if (c >= t.period) {
                too_heavy = true;
                break;
            }
            t.deadline = std::max<Tick>(1, static_cast<Tick>(std::floor(cfg.deadline_ratio *
                                                                        static_cast<double>(t.period))));
            std::vector<Tick> ones(m, 1), caps(m, c);
            t.execs = drs_split(m, c, ones, caps, rng());
            if (m > 1) {
                Tick s_total = std::max(m - 1, scaled_draw(rng, suspension_range(cfg.suspension), t.period - c));
                std::vector<Tick> s_ones(m - 1, 1), s_caps(m - 1, s_total);
                t.susps = drs_split(m - 1, s_total, s_ones, s_caps, rng());
            }
            ts.tasks.push_back(std::move(t));
        }
        if (too_heavy)
            continue;

        Tick ref = kInfinity;
        for (const auto& t : ts.tasks)
            ref = std::min(ref, t.period);
        for (auto& t : ts.tasks)
            t.jitter_max = cfg.jitter == JitterClass::None ? 0 : scaled_draw(rng, jitter_range(cfg.jitter), ref);
        return ts;
    }
    throw ModelError("task generation exceeded the retry cap: utilization too high for the period menu");
}

}  // namespace segsched
