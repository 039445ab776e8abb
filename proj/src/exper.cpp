#include "segsched/exper.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include "json.hpp"
#include "segsched/rng.hpp"
#include "segsched/treatments.hpp"

namespace segsched {

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::NomEdf:
        return "NOM-EDF";
    case Algorithm::NomRm:
        return "NOM-RM";
    case Algorithm::Comb:
        return "COMB";
    case Algorithm::NomEdfJt:
        return "NOM-EDF-JT";
    case Algorithm::NomRmJt:
        return "NOM-RM-JT";
    case Algorithm::CombJt:
        return "COMB-JT";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& s) {
    for (auto a : {Algorithm::NomEdf, Algorithm::NomRm, Algorithm::Comb, Algorithm::NomEdfJt, Algorithm::NomRmJt,
                   Algorithm::CombJt})
        if (to_string(a) == s)
            return a;
    throw ModelError("unknown algorithm '" + s + "'");
}

std::vector<double> default_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 20; ++i)
        g.push_back(i * 0.05);
    return g;
}

void validate_spec(const SweepSpec& spec) {
    if (spec.utilizations.empty())
        throw ModelError("sweep needs at least one utilization");
    for (std::size_t i = 0; i < spec.utilizations.size(); ++i) {
        double u = spec.utilizations[i];
        if (!(u >= 0.0 && u <= 1.0))
            throw ModelError("sweep utilizations must lie in [0, 1]");
        if (i > 0 && !(u > spec.utilizations[i - 1]))
            throw ModelError("sweep utilizations must be strictly increasing");
    }
    if (spec.sets_per_point == 0)
        throw ModelError("sets_per_point must be >= 1");
    if (spec.algorithms.empty())
        throw ModelError("sweep needs at least one algorithm");
    auto probe = spec.base;
    probe.total_utilization = 0.0;
    validate_config(probe);
}

std::uint64_t set_seed(std::uint64_t master_seed, std::size_t point, std::size_t index) {
    return derive_seed(master_seed, {point, index});
}

std::vector<bool> evaluate_set(const TaskSet& ts, const std::vector<Algorithm>& algorithms) {
    TaskSet no_jitter = ts;
    for (auto& t : no_jitter.tasks)
        t.jitter_max = 0;

    // Each (policy, jitter) verdict is computed once and shared.
    std::map<std::pair<PolicyKind, bool>, bool> memo;
    auto accepts = [&](PolicyKind k, bool with_jitter) {
        auto key = std::make_pair(k, with_jitter);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        Policy p = k == PolicyKind::EDF ? Policy::edf() : Policy::rm();
        bool ok = exact_schedulability(with_jitter ? ts : no_jitter, p).schedulable();
        memo.emplace(key, ok);
        return ok;
    };

    std::vector<bool> out;
    for (auto a : algorithms) {
        switch (a) {
        case Algorithm::NomEdf:
            out.push_back(accepts(PolicyKind::EDF, false));
            break;
        case Algorithm::NomRm:
            out.push_back(accepts(PolicyKind::RM, false));
            break;
        case Algorithm::Comb:
            out.push_back(accepts(PolicyKind::EDF, false) || accepts(PolicyKind::RM, false));
            break;
        case Algorithm::NomEdfJt:
            out.push_back(accepts(PolicyKind::EDF, true));
            break;
        case Algorithm::NomRmJt:
            out.push_back(accepts(PolicyKind::RM, true));
            break;
        case Algorithm::CombJt:
            out.push_back(accepts(PolicyKind::EDF, true) || accepts(PolicyKind::RM, true));
            break;
        }
    }
    return out;
}

SweepResult acceptance_curve(const SweepSpec& spec) {
    validate_spec(spec);
    const std::size_t points = spec.utilizations.size();
    const std::size_t per = spec.sets_per_point;
    std::vector<SetRecord> records(points * per);
    std::vector<std::string> errors(points * per);

    auto work = [&](std::size_t slot) {
        auto& rec = records[slot];
        rec.point = slot / per;
        rec.index = slot % per;
        rec.seed = set_seed(spec.master_seed, rec.point, rec.index);
        GenConfig cfg = spec.base;
        cfg.total_utilization = spec.utilizations[rec.point];
        try {
            auto ts = generate_taskset(cfg, rec.seed);
            rec.accepted = evaluate_set(ts, spec.algorithms);
        } catch (const ModelError& e) {
            rec.generation_failed = true;
            rec.accepted.assign(spec.algorithms.size(), false);
            errors[slot] = e.what();
        }
    };

    unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, records.size()));
    if (workers <= 1) {
        for (std::size_t s = 0; s < records.size(); ++s)
            work(s);
    } else {
        // Static striding: every slot is owned by exactly one worker.
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < records.size(); s += workers)
                    work(s);
            });
        for (auto& th : pool)
            th.join();
    }

    SweepResult res;
    for (std::size_t p = 0; p < points; ++p) {
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            SweepRow row;
            row.utilization = spec.utilizations[p];
            row.algorithm = to_string(spec.algorithms[a]);
            row.total = per;
            for (std::size_t i = 0; i < per; ++i)
                row.accepted += records[p * per + i].accepted[a] ? 1 : 0;
            row.ratio = static_cast<double>(row.accepted) / static_cast<double>(row.total);
            res.rows.push_back(row);
        }
    }
    std::stable_sort(res.rows.begin(), res.rows.end(), [](const SweepRow& x, const SweepRow& y) {
        return x.utilization != y.utilization ? x.utilization < y.utilization : x.algorithm < y.algorithm;
    });
    for (std::size_t s = 0; s < records.size(); ++s)
        if (!errors[s].empty())
            res.log.push_back("point " + std::to_string(records[s].point) + " set " + std::to_string(records[s].index) +
                              " seed " + std::to_string(records[s].seed) + ": generation failed: " + errors[s]);
    res.sets = std::move(records);
    return res;
}

std::string to_csv(const SweepResult& res) {
    std::string out = "utilization,algorithm,accepted,total,ratio\n";
    char buf[64];
    for (const auto& r : res.rows) {
        std::snprintf(buf, sizeof buf, "%.3f", r.utilization);
        out += buf;
        out += ',' + r.algorithm + ',' + std::to_string(r.accepted) + ',' + std::to_string(r.total) + ',';
        std::snprintf(buf, sizeof buf, "%.3f", r.ratio);
        out += buf;
        out += '\n';
    }
    return out;
}

std::string to_json_text(const SweepResult& res) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : res.rows)
        j["rows"].push_back({{"utilization", r.utilization},
                             {"algorithm", r.algorithm},
                             {"accepted", r.accepted},
                             {"total", r.total},
                             {"ratio", r.ratio}});
    j["sets"] = nlohmann::json::array();
    for (const auto& s : res.sets)
        j["sets"].push_back({{"point", s.point},
                             {"index", s.index},
                             {"seed", s.seed},
                             {"generation_failed", s.generation_failed},
                             {"accepted", s.accepted}});
    j["log"] = res.log;
    return j.dump(2);
}

SweepResult sweep_from_json_text(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SweepResult res;
    for (const auto& r : j.at("rows"))
        res.rows.push_back({r.at("utilization").get<double>(), r.at("algorithm").get<std::string>(),
                            r.at("accepted").get<std::size_t>(), r.at("total").get<std::size_t>(),
                            r.at("ratio").get<double>()});
    if (j.contains("sets"))
        for (const auto& s : j.at("sets"))
            res.sets.push_back({s.at("point").get<std::size_t>(), s.at("index").get<std::size_t>(),
                                s.at("seed").get<std::uint64_t>(), s.at("generation_failed").get<bool>(),
                                s.at("accepted").get<std::vector<bool>>()});
    if (j.contains("log"))
        res.log = j.at("log").get<std::vector<std::string>>();
    return res;
}

void emit_results(const SweepResult& res, ResultFormat format, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << (format == ResultFormat::Csv ? to_csv(res) : to_json_text(res) + "\n");
    out.flush();
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace segsched
