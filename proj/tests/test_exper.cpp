#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "segsched/exper.hpp"
#include "segsched/scenarios.hpp"

using namespace segsched;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.utilizations = {0.0, 0.3, 0.6, 0.9};
    spec.sets_per_point = 6;
    spec.base.n_tasks = 4;
    spec.base.segments_per_task = 2;
    spec.base.period_menu = {1, 2, 5, 10};
    spec.master_seed = 7;
    return spec;
}

const SweepRow* row(const SweepResult& r, double u, const std::string& alg) {
    for (const auto& x : r.rows)
        if (std::abs(x.utilization - u) < 1e-9 && x.algorithm == alg)
            return &x;
    return nullptr;
}

}  // namespace

TEST_CASE("csv format") {
    SweepResult one;
    one.rows.push_back({0.5, "NOM-EDF", 10, 20, 0.5});
    CHECK(to_csv(one) == "utilization,algorithm,accepted,total,ratio\n0.500,NOM-EDF,10,20,0.500\n");
    CHECK(to_csv(SweepResult{}) == "utilization,algorithm,accepted,total,ratio\n");
}

TEST_CASE("json round trip") {
    auto res = acceptance_curve(small_spec());
    CHECK(sweep_from_json_text(to_json_text(res)) == res);
}

TEST_CASE("emit_results") {
    auto dir = std::filesystem::temp_directory_path() / "segsched_exper_test";
    std::filesystem::create_directories(dir);
    SweepResult one;
    one.rows.push_back({0.5, "NOM-EDF", 10, 20, 0.5});
    emit_results(one, ResultFormat::Csv, dir / "r.csv");
    std::ifstream in(dir / "r.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == to_csv(one));
    emit_results(one, ResultFormat::Json, dir / "r.json");
    std::ifstream jin(dir / "r.json");
    std::stringstream js;
    js << jin.rdbuf();
    CHECK(sweep_from_json_text(js.str()) == one);
    try {
        emit_results(one, ResultFormat::Csv, dir / "missing" / "r.csv");
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("acceptance_curve") {
    auto spec = small_spec();
    auto res = acceptance_curve(spec);
    REQUIRE(res.rows.size() == spec.utilizations.size() * 3);
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const auto& a = res.rows[i - 1];
        const auto& b = res.rows[i];
        CHECK(std::tie(a.utilization, a.algorithm) < std::tie(b.utilization, b.algorithm));
    }
    for (const auto& r : res.rows) {
        CHECK(r.total == spec.sets_per_point);
        CHECK(r.accepted <= r.total);
        CHECK(r.ratio == doctest::Approx(double(r.accepted) / double(r.total)));
    }
    for (double u : spec.utilizations) {
        const auto* c = row(res, u, "COMB");
        CHECK(c->accepted >= row(res, u, "NOM-EDF")->accepted);
        CHECK(c->accepted >= row(res, u, "NOM-RM")->accepted);
    }
    for (const auto* alg : {"COMB", "NOM-EDF", "NOM-RM"})
        CHECK(row(res, 0.0, alg)->ratio == 1.0);

    SUBCASE("independent of worker count") {
        spec.workers = 1;
        auto serial = acceptance_curve(spec);
        spec.workers = 5;
        CHECK(acceptance_curve(spec) == serial);
        CHECK(serial == res);
    }
    SUBCASE("counts replay from the logged seeds") {
        for (const auto& set : res.sets) {
            GenConfig cfg = spec.base;
            cfg.total_utilization = spec.utilizations[set.point];
            CHECK(set.seed == set_seed(spec.master_seed, set.point, set.index));
            if (!set.generation_failed)
                CHECK(evaluate_set(generate_taskset(cfg, set.seed), spec.algorithms) == set.accepted);
        }
    }
}

TEST_CASE("evaluate_set") {
    auto ts = scenarios::two_task_nominal();
    CHECK(evaluate_set(ts, {Algorithm::NomRm}) == std::vector<bool>{true});
    auto j = scenarios::jitter_anomaly();
    auto v = evaluate_set(j, {Algorithm::NomRm, Algorithm::NomRmJt, Algorithm::CombJt});
    // Without jitter task 2 starts earlier, is preempted by task 1's second
    // segment and misses; with the maximum jitter the nominal schedule fits.
    CHECK(v == std::vector<bool>{false, true, true});
    for (auto a : {Algorithm::NomEdf, Algorithm::NomRm, Algorithm::Comb, Algorithm::NomEdfJt, Algorithm::NomRmJt,
                   Algorithm::CombJt})
        CHECK(parse_algorithm(to_string(a)) == a);
    CHECK_THROWS(parse_algorithm("SCAIR-RM"));
}

TEST_CASE("validate_spec") {
    SweepSpec spec;
    spec.utilizations = {0.5, 0.4};
    CHECK_THROWS(validate_spec(spec));
    spec.utilizations = {0.5, 1.2};
    CHECK_THROWS(validate_spec(spec));
    spec.utilizations = default_grid();
    CHECK(spec.utilizations.size() == 21);
    spec.sets_per_point = 0;
    CHECK_THROWS(validate_spec(spec));
}
