// opdyn: generation, validation, simulation, search, audit and replication for
// adversarial opinion forming on graphs.
//
// Exit codes: 0 success, 2 invalid parameters (including validation failures),
// 3 infeasible sizes or caps, 1 internal error. Machine-readable JSON goes to
// stdout, human-readable tables to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "opdyn/adversary.hpp"
#include "opdyn/concentration.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/graph_io.hpp"

namespace {

using nlohmann::json;

int cmd_validate(const opdyn::CounterexampleParams& params, std::optional<long long> n) {
    const auto report = opdyn::validate_params(params);
    json out{{"ok", report.ok()}};
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"name", v.name}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    out["violations"] = violations;

    int exit_code = report.ok() ? 0 : 2;
    if (n) {
        try {
            const auto sizes = opdyn::resolve_sizes(params, *n);
            out["sizes"] = {{"I", sizes.size_i},
                            {"J", sizes.size_j},
                            {"O", sizes.size_o},
                            {"P", sizes.size_p},
                            {"D", sizes.size_d}};
        } catch (const opdyn::infeasible_error& e) {
            out["sizes_error"] = e.what();
            exit_code = 3;
        }
    }
    std::cout << out.dump(2) << '\n';
    if (report.ok()) {
        std::cerr << "ok\n";
    } else {
        for (const auto& v : report.violations)
            std::cerr << "violated: " << v.name << "   (lhs = " << v.lhs << ", rhs = " << v.rhs
                      << ")\n";
    }
    return exit_code;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path) {
    const auto spec = opdyn::GraphSpec::from_file(spec_path);
    const auto graph = opdyn::build_graph(spec);
    if (out_path.empty()) {
        opdyn::write_edge_list(graph, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        opdyn::write_edge_list(graph, out);
    }
    std::cerr << "graph: n = " << graph.n() << ", explicit edges = " << graph.explicit_edge_count()
              << ", total edges = " << graph.edge_count() << '\n';
    return 0;
}

opdyn::AdversarySpec load_adversary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open adversary spec file: " + path);
    return opdyn::AdversarySpec::from_json(json::parse(in));
}

int cmd_run(const std::string& spec_path, const std::string& adversary_path,
            const std::string& mode_name, long long trials, std::uint64_t seed,
            const std::string& out_path, const std::string& csv_path, const std::string& scenario,
            int jobs, std::optional<bool> resample) {
    auto cfg = opdyn::ExperimentConfig::make(scenario, opdyn::GraphSpec::from_file(spec_path),
                                             load_adversary(adversary_path),
                                             opdyn::mode_from_name(mode_name), trials, seed);
    cfg.jobs = jobs;
    if (resample) cfg.resample_graph = *resample;

    const auto [records, summary] = opdyn::run_experiment(cfg);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        opdyn::write_records_jsonl(out, records);
    }
    if (!csv_path.empty()) {
        const bool fresh = !std::ifstream(csv_path).good();
        std::ofstream csv(csv_path, std::ios::app);
        if (fresh) csv << opdyn::Summary::csv_header() << '\n';
        csv << summary.csv_row() << '\n';
    }
    std::cout << summary.to_json().dump(2) << '\n';
    std::cerr << "one_majority " << summary.freq_one << "  zero_majority " << summary.freq_zero
              << "  no_strict " << summary.freq_nostrict << "  mean_rounds " << summary.mean_rounds
              << '\n';
    return 0;
}

int cmd_search(const std::string& spec_path, double mu, double delta, const std::string& mode) {
    const auto graph = opdyn::build_graph(opdyn::GraphSpec::from_file(spec_path));
    const auto result =
        opdyn::exhaustive_strong_search(graph, mu, delta, opdyn::mode_from_name(mode));
    json out{{"min_success_probability", result.min_success},
             {"e1", result.worst.e1},
             {"e0", result.worst.e0},
             {"p_one", result.probs_at_worst.one},
             {"p_zero", result.probs_at_worst.zero},
             {"p_no_strict", result.probs_at_worst.nostrict}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_audit(int n, double p, double eps, int sets, std::uint64_t seed) {
    const auto report = opdyn::edge_distribution_audit(n, p, eps, sets, seed);
    json set_arr = json::array();
    for (const auto& s : report.sets)
        set_arr.push_back({{"size", s.set_size}, {"exceptions", s.exception_count}});
    json out{{"n", report.n},         {"p", report.p},
             {"eps", report.eps},     {"bound", report.bound},
             {"violations", report.violations},
             {"max_exceptions", report.max_exception_count()},
             {"sets", set_arr}};
    std::cout << out.dump(2) << '\n';
    std::cerr << "  |S|   |X_S|   bound\n";
    for (const auto& s : report.sets)
        std::cerr << "  " << s.set_size << "   " << s.exception_count << "   " << report.bound
                  << '\n';
    std::cerr << "sampled sets = " << report.sets.size()
              << ", max |X_S| = " << report.max_exception_count()
              << ", violations = " << report.violations << '\n';
    return 0;
}

int cmd_replicate(const std::string& preset, const std::string& csv_path) {
    const auto report = opdyn::replicate(preset);
    if (!csv_path.empty()) {
        const bool fresh = !std::ifstream(csv_path).good();
        std::ofstream csv(csv_path, std::ios::app);
        if (fresh) csv << opdyn::Summary::csv_header() << '\n';
        for (const auto& s : report.summaries) csv << s.csv_row() << '\n';
    }
    std::cout << report.to_json().dump(2) << '\n';
    std::cerr << opdyn::Summary::csv_header() << '\n';
    for (const auto& s : report.summaries) std::cerr << s.csv_row() << '\n';
    std::cerr << report.notes << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial opinion forming on graphs"};
    app.require_subcommand(1);

    // validate
    opdyn::CounterexampleParams params;
    long long validate_n = -1;
    auto* validate = app.add_subcommand("validate", "check counterexample parameters");
    validate->add_option("--mu", params.mu)->required();
    validate->add_option("--delta", params.delta)->required();
    validate->add_option("--eps1", params.eps1)->required();
    validate->add_option("--eps2", params.eps2)->required();
    validate->add_option("--d", params.d)->required();
    validate->add_option("--n", validate_n, "also resolve block sizes");

    // gen
    std::string gen_spec, gen_out;
    auto* gen = app.add_subcommand("gen", "generate a graph and export its edge list");
    gen->add_option("--spec", gen_spec, "graph spec file (JSON)")->required();
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // run
    std::string run_spec, run_adversary, run_mode, run_out, run_csv, run_scenario = "experiment";
    long long run_trials = 100;
    std::uint64_t run_seed = 0;
    int run_jobs = 0;
    bool run_resample = false, run_no_resample = false;
    auto* run = app.add_subcommand("run", "Monte Carlo dissemination trials");
    run->add_option("--spec", run_spec)->required();
    run->add_option("--adversary", run_adversary, "adversary spec file (JSON)")->required();
    run->add_option("--mode", run_mode, "iterative|noniterative")->required();
    run->add_option("--trials", run_trials);
    run->add_option("--seed", run_seed, "root seed")->envname("OPDYN_SEED");
    run->add_option("--out", run_out, "trial records (JSON lines)");
    run->add_option("--csv", run_csv, "append the summary as a CSV row");
    run->add_option("--scenario", run_scenario);
    run->add_option("--jobs", run_jobs, "worker cap (0 = auto)");
    run->add_flag("--resample-graph", run_resample, "redraw the graph every trial");
    run->add_flag("--no-resample-graph", run_no_resample, "fix the graph across trials");

    // search
    std::string search_spec, search_mode;
    double search_mu = 0, search_delta = 0;
    auto* search = app.add_subcommand("search", "exhaustive strong-adversary oracle (n <= 16)");
    search->add_option("--spec", search_spec)->required();
    search->add_option("--mu", search_mu)->required();
    search->add_option("--delta", search_delta)->required();
    search->add_option("--mode", search_mode)->required();

    // audit
    int audit_n = 0, audit_sets = 100;
    double audit_p = 0, audit_eps = 0;
    std::uint64_t audit_seed = 0;
    auto* audit = app.add_subcommand("audit", "edge-distribution audit on G(n,p)");
    audit->add_option("--n", audit_n)->required();
    audit->add_option("--p", audit_p)->required();
    audit->add_option("--eps", audit_eps)->required();
    audit->add_option("--sets", audit_sets);
    audit->add_option("--seed", audit_seed)->envname("OPDYN_SEED");

    // replicate
    std::string preset, replicate_csv;
    auto* rep = app.add_subcommand("replicate", "run a canned scenario pair");
    rep->add_option("preset", preset, "fig1|counterexample|star_expander")->required();
    rep->add_option("--csv", replicate_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*validate)
            return cmd_validate(params,
                                validate_n >= 0 ? std::optional<long long>(validate_n) : std::nullopt);
        if (*gen) return cmd_gen(gen_spec, gen_out);
        if (*run) {
            std::optional<bool> resample;
            if (run_resample) resample = true;
            if (run_no_resample) resample = false;
            return cmd_run(run_spec, run_adversary, run_mode, run_trials, run_seed, run_out,
                           run_csv, run_scenario, run_jobs, resample);
        }
        if (*search) return cmd_search(search_spec, search_mu, search_delta, search_mode);
        if (*audit) return cmd_audit(audit_n, audit_p, audit_eps, audit_sets, audit_seed);
        if (*rep) return cmd_replicate(preset, replicate_csv);
        return 2;
    } catch (const opdyn::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
