#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "opdyn/adversary.hpp"
#include "opdyn/graph_io.hpp"

namespace opdyn {

struct ExperimentConfig {
    std::string scenario = "experiment";
    GraphSpec graph;
    AdversarySpec adversary;
    Mode mode = Mode::NonIterative;
    long long trials = 1;
    std::uint64_t root_seed = 0;
    bool resample_graph = false;  // default comes from graph.randomized()
    int jobs = 0;                 // 0 = auto

    static ExperimentConfig make(std::string scenario, GraphSpec g, AdversarySpec a, Mode m,
                                 long long trials, std::uint64_t root_seed);

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    std::string digest() const;  // FNV-1a of the canonical JSON, 16 hex chars
};

struct TrialRecord {
    long long trial = 0;
    std::uint64_t graph_seed = 0, adversary_seed = 0, tie_seed = 0;
    Verdict verdict = Verdict::NoStrictMajority;
    long long ones = 0, zeros = 0;
    int rounds = 0;
    long long coins = 0;
    double wall_ms = 0;

    // include_timing = false gives the canonical form used for byte-identical
    // reproducibility comparisons.
    nlohmann::json to_json(bool include_timing = true) const;
};

struct Summary {
    std::string scenario;
    Mode mode = Mode::NonIterative;
    long long trials = 0;
    double freq_one = 0, freq_zero = 0, freq_nostrict = 0;
    double ci_low = 0, ci_high = 1;  // 95% interval for the OneMajority frequency
    std::string ci_method = "clopper-pearson";
    double mean_rounds = 0;
    std::string config_digest;

    nlohmann::json to_json() const;
    std::string csv_row() const;
    static std::string csv_header();  // pinned column order
};

// Exact 95% Clopper-Pearson interval, inverted from the binomial tails.
std::pair<double, double> clopper_pearson(long long successes, long long trials,
                                          double alpha = 0.05);

// Seeds per trial: derive_seed(root, trial, stream) for the graph (when
// resampling), adversary and tie streams. Trials may run on several workers;
// the record vector is ordered by trial index regardless of schedule.
std::pair<std::vector<TrialRecord>, Summary> run_experiment(const ExperimentConfig& config);

Summary estimate_robustness(const GraphSpec& graph, const AdversarySpec& adversary, Mode mode,
                            long long trials, std::uint64_t seed);

struct ReplicateReport {
    std::string preset;
    std::vector<Summary> summaries;
    std::string notes;  // oracle reference values etc.

    nlohmann::json to_json() const;
};

// Canned scenario pairs: "fig1", "counterexample", "star_expander".
ReplicateReport replicate(const std::string& preset);

void write_records_jsonl(std::ostream& os, const std::vector<TrialRecord>& records,
                         bool include_timing = true);

}  // namespace opdyn
