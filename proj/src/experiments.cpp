#include "opdyn/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "opdyn/concentration.hpp"

namespace opdyn {

ExperimentConfig ExperimentConfig::make(std::string scenario, GraphSpec g, AdversarySpec a, Mode m,
                                        long long trials, std::uint64_t root_seed) {
    ExperimentConfig c;
    c.scenario = std::move(scenario);
    c.graph = std::move(g);
    c.adversary = std::move(a);
    c.mode = m;
    c.trials = trials;
    c.root_seed = root_seed;
    // "whp over the graph": randomized graphs are redrawn per trial, regular
    // and deterministic ones stay fixed.
    c.resample_graph = c.graph.randomized();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{{"scenario", scenario},
                          {"graph", graph.to_json()},
                          {"adversary", adversary.to_json()},
                          {"mode", mode_name(mode)},
                          {"trials", trials},
                          {"seed", root_seed},
                          {"resample_graph", resample_graph}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.scenario = j.value("scenario", std::string("experiment"));
    c.graph = GraphSpec::from_json(j.at("graph"));
    c.adversary = AdversarySpec::from_json(j.at("adversary"));
    c.mode = mode_from_name(j.at("mode").get<std::string>());
    c.trials = j.at("trials").get<long long>();
    c.root_seed = j.value("seed", 0ULL);
    c.resample_graph = j.value("resample_graph", c.graph.randomized());
    c.jobs = j.value("jobs", 0);
    return c;
}

std::string ExperimentConfig::digest() const {
    const std::uint64_t h = fnv1a64(to_json().dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json TrialRecord::to_json(bool include_timing) const {
    nlohmann::json j{{"trial", trial},
                     {"graph_seed", graph_seed},
                     {"adversary_seed", adversary_seed},
                     {"tie_seed", tie_seed},
                     {"verdict", verdict_name(verdict)},
                     {"ones", ones},
                     {"zeros", zeros},
                     {"rounds", rounds},
                     {"coins", coins}};
    if (include_timing) j["wall_ms"] = wall_ms;
    return j;
}

nlohmann::json Summary::to_json() const {
    return nlohmann::json{{"scenario", scenario},
                          {"mode", mode_name(mode)},
                          {"trials", trials},
                          {"one_majority", freq_one},
                          {"zero_majority", freq_zero},
                          {"no_strict", freq_nostrict},
                          {"ci_low", ci_low},
                          {"ci_high", ci_high},
                          {"ci_method", ci_method},
                          {"mean_rounds", mean_rounds},
                          {"config_digest", config_digest}};
}

std::string Summary::csv_header() {
    return "scenario,mode,trials,one_majority,zero_majority,no_strict,ci_low,ci_high,mean_rounds";
}

std::string Summary::csv_row() const {
    std::ostringstream os;
    os.precision(10);
    os << scenario << ',' << mode_name(mode) << ',' << trials << ',' << freq_one << ','
       << freq_zero << ',' << freq_nostrict << ',' << ci_low << ',' << ci_high << ','
       << mean_rounds;
    return os.str();
}

std::pair<double, double> clopper_pearson(long long successes, long long trials, double alpha) {
    if (trials <= 0) throw std::invalid_argument("clopper_pearson: trials must be > 0");
    auto bisect = [&](auto f) {
        double lo = 0, hi = 1;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (f(mid)) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    double low = 0, high = 1;
    if (successes > 0)
        low = bisect([&](double p) { return binomial_tail_geq(trials, p, successes) >= alpha / 2; });
    if (successes < trials)
        high = bisect([&](double p) { return binomial_tail_leq(trials, p, successes) <= alpha / 2; });
    return {low, high};
}

namespace {

int default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
}

Summary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
    Summary s;
    s.scenario = cfg.scenario;
    s.mode = cfg.mode;
    s.trials = static_cast<long long>(records.size());
    long long ones = 0, zeros = 0, nostrict = 0;
    double rounds = 0;
    for (const auto& r : records) {
        switch (r.verdict) {
            case Verdict::OneMajority: ++ones; break;
            case Verdict::ZeroMajority: ++zeros; break;
            case Verdict::NoStrictMajority: ++nostrict; break;
        }
        rounds += r.rounds;
    }
    const double t = static_cast<double>(s.trials);
    s.freq_one = ones / t;
    s.freq_zero = zeros / t;
    s.freq_nostrict = nostrict / t;
    s.mean_rounds = rounds / t;
    std::tie(s.ci_low, s.ci_high) = clopper_pearson(ones, s.trials);
    s.config_digest = cfg.digest();
    return s;
}

}  // namespace

std::pair<std::vector<TrialRecord>, Summary> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");

    Graph shared;
    const bool fixed = !cfg.resample_graph;
    if (fixed) shared = build_graph(cfg.graph);

    std::vector<TrialRecord> records(cfg.trials);
    std::atomic<long long> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const long long t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (first_error) return;
            }
            try {
                const auto started = std::chrono::steady_clock::now();
                TrialRecord rec;
                rec.trial = t;
                rec.adversary_seed = derive_seed(cfg.root_seed, t, kStreamAdversary);
                rec.tie_seed = derive_seed(cfg.root_seed, t, kStreamTie);

                Graph local;
                const Graph* g = &shared;
                if (!fixed) {
                    rec.graph_seed = derive_seed(cfg.root_seed, t, kStreamGraph);
                    local = build_graph(cfg.graph, rec.graph_seed);
                    g = &local;
                } else {
                    rec.graph_seed = cfg.graph.seed;
                }

                const auto assignment = apply_adversary(*g, cfg.adversary, rec.adversary_seed);
                Outcome outcome{};
                if (cfg.mode == Mode::NonIterative) {
                    long long coins = 0;
                    const auto labeling = disseminate_noniterative(*g, assignment, rec.tie_seed, &coins);
                    outcome = majority_outcome(labeling);
                    rec.rounds = 1;
                    rec.coins = coins;
                } else {
                    const auto trace =
                        disseminate_iterative(*g, assignment, rec.tie_seed, /*record_vertices=*/false);
                    outcome = majority_outcome(trace.final);
                    rec.rounds = static_cast<int>(trace.rounds.size());
                    rec.coins = trace.coins_used;
                }
                rec.verdict = outcome.verdict;
                rec.ones = outcome.ones;
                rec.zeros = outcome.zeros;
                rec.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
                records[t] = rec;
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!first_error) {
                    try {
                        std::throw_with_nested(
                            std::runtime_error("trial " + std::to_string(t) + " failed"));
                    } catch (...) {
                        first_error = std::current_exception();
                    }
                }
                return;
            }
        }
    };

    int jobs = cfg.jobs > 0 ? cfg.jobs : default_jobs();
    jobs = static_cast<int>(std::min<long long>(jobs, cfg.trials));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    Summary summary = summarize(cfg, records);
    return {std::move(records), std::move(summary)};
}

Summary estimate_robustness(const GraphSpec& graph, const AdversarySpec& adversary, Mode mode,
                            long long trials, std::uint64_t seed) {
    auto cfg = ExperimentConfig::make("estimate", graph, adversary, mode, trials, seed);
    return run_experiment(cfg).second;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

// The flagship parameter set. Tighter eps/d choices only concentrate at n
// far beyond desk scale, so the presets embed these.
CounterexampleParams pstar() {
    CounterexampleParams q;
    q.mu = 0.4;
    q.delta = 0.45;
    q.eps1 = 0.089;
    q.eps2 = 5e-4;
    q.d = 0.004;
    return q;
}

GraphSpec pstar_spec(GraphMode mode) {
    GraphSpec g;
    g.type = GraphSpec::Type::Counterexample;
    g.params = pstar();
    g.n = 20000;
    g.mode = mode;
    g.seed = 1;
    return g;
}

AdversarySpec strong_spec(double mu, double delta, StrategySpec strategy) {
    AdversarySpec a;
    a.kind = AdversarySpec::Kind::Strong;
    a.mu = mu;
    a.delta = delta;
    a.strategy = std::move(strategy);
    return a;
}

}  // namespace

nlohmann::json ReplicateReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : summaries) arr.push_back(s.to_json());
    return nlohmann::json{{"preset", preset}, {"summaries", arr}, {"notes", notes}};
}

ReplicateReport replicate(const std::string& preset) {
    ReplicateReport rep;
    rep.preset = preset;
    std::ostringstream notes;

    if (preset == "counterexample") {
        const auto graph = pstar_spec(GraphMode::Regular);
        const auto adversary = strong_spec(0.4, 0.45, StrategySpec{.name = "blocks_I_O"});
        auto iter = ExperimentConfig::make("counterexample-iterative", graph, adversary,
                                           Mode::Iterative, 1000, 101);
        auto noniter = ExperimentConfig::make("counterexample-noniterative", graph, adversary,
                                              Mode::NonIterative, 1000, 202);
        rep.summaries.push_back(run_experiment(iter).second);
        rep.summaries.push_back(run_experiment(noniter).second);
        notes << "exact non-iterative P(OneMajority) = P(Bin(80,1/2) >= 41) = "
              << binomial_tail_geq(80, 0.5, 41)
              << "; iterative outcome is deterministic at (ones=10040, zeros=9960)";
    } else if (preset == "fig1") {
        GraphSpec line;
        line.type = GraphSpec::Type::Line;
        line.n = 13;
        const double mu = 8.0 / 13.0, delta = 0.25;
        auto top = ExperimentConfig::make(
            "fig1-top-iterative", line,
            strong_spec(mu, delta, StrategySpec{.name = "prefix", .k1 = 6, .k0 = 2}),
            Mode::Iterative, 1000, 303);
        StrategySpec bottom{.name = "explicit"};
        bottom.e1 = {0, 1, 2, 3, 4, 5};
        bottom.e0 = {6, 9};
        auto bot = ExperimentConfig::make("fig1-bottom-noniterative", line,
                                          strong_spec(mu, delta, bottom), Mode::NonIterative,
                                          10000, 404);
        rep.summaries.push_back(run_experiment(top).second);
        rep.summaries.push_back(run_experiment(bot).second);
        notes << "iterative top row is deterministic (ones=6, zeros=7); exact non-iterative "
                 "P(OneMajority) for the bottom row = 3/4";
    } else if (preset == "star_expander") {
        // Sizes are demonstration values found with this simulator: the star
        // outweighs the expander difference non-iteratively, the expander
        // consensus wins iteratively.
        GraphSpec star;
        star.type = GraphSpec::Type::Star;
        star.leaves = 600;
        GraphSpec expander;
        expander.type = GraphSpec::Type::Regular;
        expander.n = 1200;
        expander.deg = 10;
        expander.seed = 7;
        GraphSpec both;
        both.type = GraphSpec::Type::Union;
        both.parts = {star, expander};

        AdversarySpec weak;
        weak.kind = AdversarySpec::Kind::Weak;
        weak.mu = 0.0625;
        weak.delta = 0.35;
        weak.strategy = StrategySpec{.name = "star_center_first"};

        auto iter = ExperimentConfig::make("star-expander-iterative", both, weak, Mode::Iterative,
                                           400, 505);
        iter.resample_graph = false;  // the scenario fixes one expander
        auto noniter = ExperimentConfig::make("star-expander-noniterative", both, weak,
                                              Mode::NonIterative, 400, 606);
        noniter.resample_graph = false;
        rep.summaries.push_back(run_experiment(iter).second);
        rep.summaries.push_back(run_experiment(noniter).second);
        notes << "qualitative demonstration: the center expert drags the whole star to '0' with "
                 "probability 1/2-delta = 0.15; iterativity recovers the expander's majority";
    } else {
        throw std::invalid_argument("replicate: unknown preset '" + preset +
                                    "' (expected fig1|counterexample|star_expander)");
    }

    rep.notes = notes.str();
    return rep;
}

void write_records_jsonl(std::ostream& os, const std::vector<TrialRecord>& records,
                         bool include_timing) {
    for (const auto& r : records) os << r.to_json(include_timing).dump() << '\n';
}

}  // namespace opdyn
