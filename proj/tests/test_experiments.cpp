#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "opdyn/experiments.hpp"

using namespace opdyn;

namespace {

GraphSpec line13() {
    GraphSpec g;
    g.type = GraphSpec::Type::Line;
    g.n = 13;
    return g;
}

AdversarySpec fig1_top_adversary() {
    AdversarySpec a;
    a.kind = AdversarySpec::Kind::Strong;
    a.mu = 8.0 / 13.0;
    a.delta = 0.25;
    a.strategy = StrategySpec{.name = "prefix", .k1 = 6, .k0 = 2};
    return a;
}

AdversarySpec fig1_bottom_adversary() {
    AdversarySpec a;
    a.kind = AdversarySpec::Kind::Strong;
    a.mu = 8.0 / 13.0;
    a.delta = 0.25;
    a.strategy.name = "explicit";
    a.strategy.e1 = {0, 1, 2, 3, 4, 5};
    a.strategy.e0 = {6, 9};
    return a;
}

}  // namespace

TEST_CASE("fig1 top row: iterative ZeroMajority in every trial") {
    auto cfg = ExperimentConfig::make("fig1-top", line13(), fig1_top_adversary(), Mode::Iterative,
                                      200, 42);
    const auto [records, summary] = run_experiment(cfg);
    CHECK(summary.freq_zero == 1.0);
    CHECK(summary.freq_one == 0.0);
    for (const auto& r : records) {
        CHECK(r.ones == 6);
        CHECK(r.zeros == 7);
        CHECK(r.rounds == 5);
        CHECK(r.coins == 0);
    }
}

TEST_CASE("fig1 bottom row: non-iterative frequency near 3/4") {
    auto cfg = ExperimentConfig::make("fig1-bottom", line13(), fig1_bottom_adversary(),
                                      Mode::NonIterative, 10000, 43);
    const auto summary = run_experiment(cfg).second;
    CHECK(std::fabs(summary.freq_one - 0.75) <= 0.02);
    CHECK(summary.mean_rounds == 1.0);
}

TEST_CASE("reproducibility: identical configs give identical record streams") {
    auto cfg = ExperimentConfig::make("repro", line13(), fig1_bottom_adversary(),
                                      Mode::NonIterative, 500, 7);
    const auto run1 = run_experiment(cfg);
    const auto run2 = run_experiment(cfg);
    std::ostringstream s1, s2;
    write_records_jsonl(s1, run1.first, /*include_timing=*/false);
    write_records_jsonl(s2, run2.first, /*include_timing=*/false);
    CHECK(s1.str() == s2.str());
    CHECK(run1.second.to_json() == run2.second.to_json());
}

TEST_CASE("schedule independence: jobs = 1 and jobs = 4 agree byte for byte") {
    auto cfg = ExperimentConfig::make("jobs", line13(), fig1_bottom_adversary(),
                                      Mode::NonIterative, 400, 9);
    cfg.jobs = 1;
    const auto serial = run_experiment(cfg).first;
    cfg.jobs = 4;
    const auto parallel = run_experiment(cfg).first;
    std::ostringstream s1, s2;
    write_records_jsonl(s1, serial, false);
    write_records_jsonl(s2, parallel, false);
    CHECK(s1.str() == s2.str());
}

TEST_CASE("conservation: ones + zeros = n in every trial") {
    GraphSpec er;
    er.type = GraphSpec::Type::Er;
    er.n = 60;
    er.p = 0.08;
    er.seed = 5;
    AdversarySpec adv;
    adv.kind = AdversarySpec::Kind::Random;
    adv.mu = 0.2;
    adv.delta = 0.3;
    for (Mode mode : {Mode::Iterative, Mode::NonIterative}) {
        auto cfg = ExperimentConfig::make("conservation", er, adv, mode, 100, 77);
        CHECK(cfg.resample_graph);  // random graphs redraw per trial
        const auto records = run_experiment(cfg).first;
        for (const auto& r : records) CHECK(r.ones + r.zeros == 60);
    }
}

TEST_CASE("estimate_robustness: delta = 1/2 random adversary on K10 is all-one") {
    GraphSpec k10;
    k10.type = GraphSpec::Type::Er;
    k10.n = 10;
    k10.p = 1.0;
    AdversarySpec adv;
    adv.kind = AdversarySpec::Kind::Random;
    adv.mu = 0.4;
    adv.delta = 0.5;
    const auto summary = estimate_robustness(k10, adv, Mode::NonIterative, 300, 3);
    CHECK(summary.freq_one == 1.0);
}

TEST_CASE("clopper-pearson intervals") {
    // frozen against scipy.stats.beta.ppf-based intervals
    auto [lo, hi] = clopper_pearson(0, 100);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.03621669264).epsilon(1e-6));
    std::tie(lo, hi) = clopper_pearson(100, 100);
    CHECK(lo == doctest::Approx(0.96378330736).epsilon(1e-6));
    CHECK(hi == 1.0);
    std::tie(lo, hi) = clopper_pearson(50, 100);
    CHECK(lo == doctest::Approx(0.3983211295033).epsilon(1e-6));
    CHECK(hi == doctest::Approx(0.6016788704967).epsilon(1e-6));
    // coverage sanity: interval contains the point estimate
    std::tie(lo, hi) = clopper_pearson(455, 1000);
    CHECK(lo < 0.455);
    CHECK(hi > 0.455);
}

TEST_CASE("confidence: the 95% interval covers a known q in most meta-runs") {
    // line(13) bottom row has exact q = 3/4; run 100 meta-estimates
    int covered = 0;
    for (int meta = 0; meta < 100; ++meta) {
        auto cfg = ExperimentConfig::make("meta", line13(), fig1_bottom_adversary(),
                                          Mode::NonIterative, 200, 10000 + meta);
        const auto s = run_experiment(cfg).second;
        if (s.ci_low <= 0.75 && 0.75 <= s.ci_high) ++covered;
    }
    CHECK(covered >= 93);
}

TEST_CASE("CSV header and row shape") {
    CHECK(Summary::csv_header() ==
          "scenario,mode,trials,one_majority,zero_majority,no_strict,ci_low,ci_high,mean_rounds");
    auto cfg = ExperimentConfig::make("csv-test", line13(), fig1_top_adversary(), Mode::Iterative,
                                      10, 1);
    const auto s = run_experiment(cfg).second;
    const auto row = s.csv_row();
    CHECK(row.substr(0, 8) == "csv-test");
    CHECK(std::count(row.begin(), row.end(), ',') == 8);
}

TEST_CASE("trial record JSON carries the documented fields") {
    auto cfg = ExperimentConfig::make("fields", line13(), fig1_top_adversary(), Mode::Iterative,
                                      3, 12);
    const auto records = run_experiment(cfg).first;
    const auto j = records[1].to_json();
    for (const char* key : {"trial", "graph_seed", "adversary_seed", "tie_seed", "verdict", "ones",
                            "zeros", "rounds", "coins", "wall_ms"})
        CHECK(j.contains(key));
    CHECK(j.at("trial") == 1);
    CHECK_FALSE(records[1].to_json(false).contains("wall_ms"));
    // derived seed contract
    CHECK(j.at("tie_seed") == derive_seed(12, 1, kStreamTie));
    CHECK(j.at("adversary_seed") == derive_seed(12, 1, kStreamAdversary));
}

TEST_CASE("config digest is stable and sensitive") {
    auto cfg = ExperimentConfig::make("digest", line13(), fig1_top_adversary(), Mode::Iterative,
                                      10, 1);
    const auto d1 = cfg.digest();
    CHECK(d1.size() == 16);
    CHECK(cfg.digest() == d1);
    cfg.trials = 11;
    CHECK(cfg.digest() != d1);
}

TEST_CASE("experiment config JSON round trip") {
    auto cfg = ExperimentConfig::make("roundtrip", line13(), fig1_bottom_adversary(),
                                      Mode::NonIterative, 42, 99);
    const auto j = cfg.to_json();
    const auto back = ExperimentConfig::from_json(j);
    CHECK(back.to_json() == j);
}
