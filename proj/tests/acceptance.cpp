// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "segsched/behavior.hpp"
#include "segsched/checks.hpp"
#include "segsched/exper.hpp"
#include "segsched/rng.hpp"
#include "segsched/scenarios.hpp"
#include "segsched/synth.hpp"

using namespace segsched;

namespace {

using IV = std::vector<Interval>;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure descriptions of a criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok)
            return;
        pass_ = false;
        if (++failures_ <= 3)
            notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    Outcome done(const std::string& summary) const {
        std::ostringstream out;
        out << summary;
        if (!pass_)
            out << " | " << failures_ << " failed: " << notes_.str();
        return {pass_, out.str()};
    }

private:
    bool pass_ = true;
    int failures_ = 0;
    std::ostringstream notes_;
};

std::string show(const std::optional<Tick>& t) { return t ? std::to_string(*t) : "none"; }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Figure {
    NominalPlan plan;
    RuntimeBehavior behavior;
    Schedule run(OnlineMode m) const { return run_online(plan, behavior, m); }
};

Figure figure(int n) {
    auto sc = scenarios::by_figure(n);
    auto plan = build_nominal(sc.taskset, sc.policy);
    auto b = replay_behavior(sc.taskset, plan.horizon, sc.draws);
    return {std::move(plan), std::move(b)};
}

Outcome fig3_nominal() {
    auto t0 = Clock::now();
    Check c;
    auto ts = scenarios::two_task_nominal();
    auto plan = build_nominal(ts, Policy::rm(), 26);
    const auto& s = plan.nominal;
    const std::pair<SegmentKey, IV> expected[] = {
        {{1, 0, 0}, {{0, 3}}},   {{1, 0, 1}, {{5, 7}}},   {{2, 0, 0}, {{3, 5}}},
        {{2, 0, 1}, {{7, 9}}},   {{1, 1, 0}, {{10, 13}}}, {{1, 1, 1}, {{15, 17}}},
        {{2, 1, 0}, {{13, 15}}}, {{2, 1, 1}, {{17, 19}}}, {{1, 2, 0}, {{20, 23}}},
    };
    for (const auto& [key, ivs] : expected)
        c.expect(s.at(key).intervals == ivs, "intervals of " + to_string(key));
    std::vector<Tick> finishes;
    for (const auto& r : s.segments)
        if (r.finish && *r.finish <= 23)
            finishes.push_back(*r.finish);
    std::sort(finishes.begin(), finishes.end());
    c.expect(finishes == std::vector<Tick>{3, 5, 7, 9, 13, 15, 17, 19, 23}, "finish set");
    // The full hyperperiod schedule agrees on the same prefix.
    auto full = build_nominal(ts, Policy::rm());
    for (const auto& [key, ivs] : expected)
        c.expect(full.nominal.at(key).intervals == ivs, "hyperperiod intervals of " + to_string(key));
    double secs = seconds_since(t0);
    c.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
    return c.done("finishes 3,5,7,9,13,15,17,19,23; " + std::to_string(secs) + " s");
}

Outcome fig1_anomaly() {
    Check c;
    auto f = figure(1);
    auto untreated = f.run(OnlineMode::Untreated);
    auto enforce = f.run(OnlineMode::Enforce);
    auto pref = f.run(OnlineMode::Preference);
    const SegmentKey last{2, 0, 1};
    c.expect(untreated.at(last).finish == 110, "untreated finish " + show(untreated.at(last).finish));
    c.expect(f.plan.nominal.at(last).finish == 90, "nominal finish " + show(f.plan.nominal.at(last).finish));
    for (const auto& r : enforce.segments)
        c.expect(r.finish == f.plan.nominal.at(r.key).finish, "enforce finish of " + to_string(r.key));
    c.expect(pref.at(last).finish && *pref.at(last).finish <= 90, "preference finish " + show(pref.at(last).finish));
    return c.done("tau2 finish: untreated " + show(untreated.at(last).finish) + ", enforce " +
                  show(enforce.at(last).finish) + ", preference " + show(pref.at(last).finish) + " (x0.1)");
}

Outcome fig2_jitter() {
    Check c;
    auto f = figure(2);
    const SegmentKey last{2, 0, 1};
    auto nominal = f.plan.nominal.at(last).finish;
    auto untreated = f.run(OnlineMode::Untreated).at(last).finish;
    auto enforce = f.run(OnlineMode::Enforce).at(last).finish;
    auto pref = f.run(OnlineMode::Preference).at(last).finish;
    c.expect(f.plan.feasible, "nominal infeasible");
    c.expect(nominal == 96, "nominal finish " + show(nominal));
    c.expect(untreated == 120, "untreated finish " + show(untreated));
    c.expect(enforce && *enforce <= 96, "enforce finish " + show(enforce));
    c.expect(pref && *pref <= 96, "preference finish " + show(pref));
    return c.done("tau2 finish: nominal " + show(nominal) + ", untreated " + show(untreated) + ", enforce " +
                  show(enforce) + ", preference " + show(pref) + " (x0.1)");
}

Outcome fig5_average() {
    Check c;
    auto f = figure(5);
    const SegmentKey last{2, 0, 1};
    auto enforce = f.run(OnlineMode::Enforce);
    auto untreated = f.run(OnlineMode::Untreated);
    auto pref = f.run(OnlineMode::Preference);
    c.expect(enforce.at(last).finish == 70, "enforce finish " + show(enforce.at(last).finish));
    c.expect(untreated.at(last).finish == 40, "untreated finish " + show(untreated.at(last).finish));
    c.expect(pref.at(last).finish == 40, "preference finish " + show(pref.at(last).finish));
    for (const auto& r : pref.segments)
        c.expect(r.intervals == untreated.at(r.key).intervals, "intervals differ for " + to_string(r.key));
    return c.done("tau2 finish: enforce " + show(enforce.at(last).finish) + ", preference " +
                  show(pref.at(last).finish) + ", untreated " + show(untreated.at(last).finish) + " (x0.1)");
}

Outcome fig8_working() {
    Check c;
    auto f = figure(8);
    const SegmentKey seq[] = {{1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 0, 1}};
    std::string ranks;
    for (std::size_t i = 0; i < 4; ++i) {
        auto r = f.plan.preference.rank(seq[i]) + 1;
        ranks += (i ? "," : "") + std::to_string(r);
        c.expect(r == i + 1, "rank of " + to_string(seq[i]));
    }
    auto pref = f.run(OnlineMode::Preference);
    auto untreated = f.run(OnlineMode::Untreated);
    const SegmentKey second{2, 1, 0};
    c.expect(pref.at(second).intervals == IV{{6, 7}}, "preference interval of the second job");
    c.expect(pref.at(second).finish == f.plan.nominal.at(second).finish, "preference finish changed");
    c.expect(f.plan.nominal.at(second).finish == 7, "nominal finish " + show(f.plan.nominal.at(second).finish));
    c.expect(untreated.at(second).intervals == IV{{8, 9}}, "untreated interval of the second job");
    return c.done("preference ranks (" + ranks + "); second job: preference [6,7), untreated [" +
                  std::to_string(untreated.at(second).intervals.front().begin) + "," +
                  std::to_string(untreated.at(second).intervals.front().end) + ")");
}

// ---------------------------------------------------------------------------
// Randomized trials over every generator class

struct TrialStats {
    std::atomic<std::uint64_t> trials{0};
    std::atomic<std::uint64_t> plans{0};
    std::atomic<std::uint64_t> anomaly_violations{0};
    std::atomic<std::uint64_t> schedules_checked{0};
    std::atomic<std::uint64_t> segments_checked{0};
    std::atomic<std::uint64_t> oracle_mismatches{0};
    std::atomic<std::uint64_t> lemma_segments{0};
    std::atomic<std::uint64_t> lemma_violations{0};
    std::atomic<std::uint64_t> release_mismatches{0};
    std::atomic<std::uint64_t> classes_without_plans{0};
    std::atomic<std::uint64_t> untreated_anomalies{0};
    std::mutex mu;
    std::vector<std::string> notes;
    double seconds = 0;

    void note(const std::string& s) {
        std::lock_guard<std::mutex> lock(mu);
        if (notes.size() < 5)
            notes.push_back(s);
    }
};

constexpr std::size_t kPlansPerClass = 28;
constexpr std::size_t kBehaviorsPerPlan = 5;
constexpr std::uint64_t kTrialRoot = 20240601;

GenConfig class_config(std::size_t cls) {
    const std::size_t segments[] = {2, 5, 8};
    GenConfig cfg;
    cfg.segments_per_task = segments[cls / 12];
    cfg.suspension = static_cast<SuspensionClass>((cls / 4) % 3);
    cfg.jitter = static_cast<JitterClass>(cls % 4);
    return cfg;
}

// A feasible plan for (class, slot), or nullopt after a bounded number of
// generation attempts.
std::optional<NominalPlan> feasible_plan(std::size_t cls, std::size_t slot) {
    auto cfg = class_config(cls);
    for (std::uint64_t attempt = 0; attempt < 40; ++attempt) {
        std::uint64_t seed = derive_seed(kTrialRoot, {cls, slot, attempt});
        std::uint64_t x = seed;
        cfg.total_utilization = 0.05 + 0.55 * double(splitmix64(x) % 1000) / 1000.0;
        TaskSet ts;
        try {
            ts = generate_taskset(cfg, seed);
        } catch (const ModelError&) {
            continue;
        }
        auto plan = build_nominal(ts, slot % 2 ? Policy::rm() : Policy::edf());
        if (plan.feasible)
            return plan;
    }
    return std::nullopt;
}

void run_class_slot(std::size_t cls, std::size_t slot, TrialStats& st) {
    auto plan = feasible_plan(cls, slot);
    if (!plan) {
        st.note("class " + std::to_string(cls) + " slot " + std::to_string(slot) + ": no feasible plan");
        return;
    }
    st.plans++;

    auto check_oracle = [&](const Schedule& s, const PriorityOrder& order) {
        auto mism = check_oracle_equivalence(s, order);
        st.schedules_checked++;
        st.segments_checked += s.segments.size();
        if (!mism.empty()) {
            st.oracle_mismatches += mism.size();
            st.note("oracle mismatch at " + to_string(mism[0].key));
        }
    };
    check_oracle(plan->nominal, plan->order);
    auto lemma = check_interference_lower_bound(plan->nominal, plan->order);
    st.lemma_segments += plan->nominal.segments.size();
    if (!lemma.empty()) {
        st.lemma_violations += lemma.size();
        st.note("interference bound violated at " + to_string(lemma[0]));
    }

    for (std::size_t k = 0; k < kBehaviorsPerPlan; ++k) {
        std::uint64_t seed = derive_seed(kTrialRoot, {cls, slot, 1000 + k});
        std::uint64_t x = seed;
        BehaviorProfile profile{0.1 + 0.9 * double(splitmix64(x) % 1000) / 1000.0,
                                0.1 + 0.9 * double(splitmix64(x) % 1000) / 1000.0};
        auto b = sample_behavior(plan->taskset, plan->horizon, profile, seed);
        st.trials++;
        for (auto mode : {OnlineMode::Enforce, OnlineMode::Preference}) {
            auto s = run_online(*plan, b, mode);
            check_oracle(s, order_for(*plan, mode));
            auto rep = check_anomaly_free(*plan, s);
            if (!rep.anomaly_free) {
                st.anomaly_violations++;
                st.note(std::string(to_string(mode)) + " anomaly at " + to_string(rep.violations[0].key));
            }
            if (mode == OnlineMode::Enforce)
                for (const auto& r : s.segments)
                    if (r.release != plan->nominal.at(r.key).release) {
                        st.release_mismatches++;
                        st.note("enforced release of " + to_string(r.key) + " is " + show(r.release));
                    }
        }
        auto u = run_online(*plan, b, OnlineMode::Untreated);
        check_oracle(u, plan->order);
        if (!check_anomaly_free(*plan, u).anomaly_free)
            st.untreated_anomalies++;
    }
}

TrialStats& trial_stats() {
    static TrialStats st;
    static bool ran = false;
    if (ran)
        return st;
    ran = true;
    auto t0 = Clock::now();
    const std::size_t jobs = 36 * kPlansPerClass;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::vector<std::uint64_t> plans_per_class(36, 0);
    std::mutex class_mu;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t j = w; j < jobs; j += workers) {
                auto before = st.plans.load();
                run_class_slot(j / kPlansPerClass, j % kPlansPerClass, st);
                if (st.plans.load() != before) {
                    std::lock_guard<std::mutex> lock(class_mu);
                    plans_per_class[j / kPlansPerClass]++;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto n : plans_per_class)
        if (n == 0)
            st.classes_without_plans++;
    st.seconds = seconds_since(t0);
    return st;
}

std::string notes(const TrialStats& st) {
    std::string s;
    for (const auto& n : st.notes)
        s += (s.empty() ? "" : "; ") + n;
    return s;
}

Outcome anomaly_freedom() {
    auto& st = trial_stats();
    Check c;
    c.expect(st.trials >= 5000, "only " + std::to_string(st.trials.load()) + " trials");
    c.expect(st.classes_without_plans == 0,
             std::to_string(st.classes_without_plans.load()) + " generator classes without a feasible plan");
    c.expect(st.anomaly_violations == 0, std::to_string(st.anomaly_violations.load()) + " anomalous runs");
    c.expect(st.seconds < 300, "runtime " + std::to_string(st.seconds) + " s");
    if (!st.notes.empty() && st.anomaly_violations > 0)
        c.expect(false, notes(st));
    std::ostringstream out;
    out << st.trials << " trials over " << st.plans << " feasible plans in 36 classes, "
        << st.untreated_anomalies << " untreated runs anomalous, 0 expected for treatments; " << st.seconds << " s";
    return c.done(out.str());
}

Outcome oracle_equivalence() {
    auto& st = trial_stats();
    Check c;
    c.expect(st.oracle_mismatches == 0, std::to_string(st.oracle_mismatches.load()) + " mismatches");
    std::ostringstream out;
    out << st.segments_checked << " segments in " << st.schedules_checked << " schedules";
    return c.done(out.str());
}

Outcome interference_bound() {
    auto& st = trial_stats();
    Check c;
    c.expect(st.lemma_violations == 0, std::to_string(st.lemma_violations.load()) + " violations");
    return c.done(std::to_string(st.lemma_segments.load()) + " nominal segments");
}

Outcome release_identity() {
    auto& st = trial_stats();
    Check c;
    c.expect(st.release_mismatches == 0, std::to_string(st.release_mismatches.load()) + " mismatches");
    return c.done(std::to_string(st.trials.load()) + " enforced runs");
}

// ---------------------------------------------------------------------------
// Sweeps

double ratio_at(const SweepResult& r, double u, const std::string& alg) {
    for (const auto& row : r.rows)
        if (std::abs(row.utilization - u) < 1e-9 && row.algorithm == alg)
            return row.ratio;
    throw std::runtime_error("no row for " + alg);
}

Outcome sweep_sanity() {
    auto t0 = Clock::now();
    Check c;
    SweepSpec spec;
    spec.utilizations = default_grid();
    spec.sets_per_point = 20;
    spec.master_seed = 1;
    auto res = acceptance_curve(spec);
    std::ostringstream out;
    for (const char* alg : {"NOM-EDF", "NOM-RM"}) {
        c.expect(ratio_at(res, 0.05, alg) == 1.0, std::string(alg) + " below 1.0 at u=0.05");
        c.expect(ratio_at(res, 1.0, alg) <= 0.2, std::string(alg) + " above 0.2 at u=1.0");
        int rises = 0;
        double worst = 0;
        for (std::size_t i = 1; i < spec.utilizations.size(); ++i) {
            double d = ratio_at(res, spec.utilizations[i], alg) - ratio_at(res, spec.utilizations[i - 1], alg);
            if (d > 1e-12) {
                ++rises;
                worst = std::max(worst, d);
            }
        }
        c.expect(rises <= 1 && worst <= 0.1 + 1e-12,
                 std::string(alg) + " has " + std::to_string(rises) + " rises, largest " + std::to_string(worst));
        out << alg << " " << ratio_at(res, 0.05, alg) << "->" << ratio_at(res, 1.0, alg) << " (" << rises
            << " rises); ";
    }
    for (double u : spec.utilizations) {
        double comb = ratio_at(res, u, "COMB");
        c.expect(comb >= ratio_at(res, u, "NOM-EDF") && comb >= ratio_at(res, u, "NOM-RM"),
                 "COMB below a component at u=" + std::to_string(u));
    }
    out << res.log.size() << " generation failures logged; " << seconds_since(t0) << " s";
    return c.done(out.str());
}

Outcome jitter_impact() {
    auto t0 = Clock::now();
    Check c;
    SweepSpec spec;
    spec.sets_per_point = 20;
    spec.master_seed = 1;
    spec.algorithms = {Algorithm::NomEdf, Algorithm::NomEdfJt};
    std::ostringstream out;

    spec.utilizations = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    spec.base.jitter = JitterClass::Minor;
    auto minor = acceptance_curve(spec);
    double widest = 0;
    for (double u : spec.utilizations) {
        double d = std::abs(ratio_at(minor, u, "NOM-EDF-JT") - ratio_at(minor, u, "NOM-EDF"));
        widest = std::max(widest, d);
        c.expect(d <= 0.15 + 1e-12, "minor jitter gap " + std::to_string(d) + " at u=" + std::to_string(u));
    }
    out << "minor jitter, u<=0.4: largest gap " << widest << "; ";

    spec.utilizations = {0.8, 0.85, 0.9, 0.95, 1.0};
    spec.base.jitter = JitterClass::Serious;
    auto serious = acceptance_curve(spec);
    for (double u : spec.utilizations) {
        double jt = ratio_at(serious, u, "NOM-EDF-JT"), plain = ratio_at(serious, u, "NOM-EDF");
        c.expect(jt <= plain + 1e-12, "serious jitter helps at u=" + std::to_string(u) + " (" + std::to_string(jt) +
                                          " > " + std::to_string(plain) + ")");
        out << "u=" << u << " " << jt << "<=" << plain << " ";
    }
    out << "; " << seconds_since(t0) << " s";
    return c.done(out.str());
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"two-task nominal schedule", fig3_nominal},
        {"early-suspension anomaly and treatments", fig1_anomaly},
        {"jitter anomaly and treatments", fig2_jitter},
        {"average-case enforcement cost", fig5_average},
        {"working example preference ranks", fig8_working},
        {"anomaly freedom of both treatments", anomaly_freedom},
        {"fixed-point oracle equivalence", oracle_equivalence},
        {"interference lower bound", interference_bound},
        {"enforced release identity", release_identity},
        {"acceptance sweep sanity", sweep_sanity},
        {"jitter impact on acceptance", jitter_impact},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
