#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

// Graph spec files: {"type": "counterexample"|"er"|"line"|"star"|"regular"|"union", ...}.
struct GraphSpec {
    enum class Type { Counterexample, Er, Line, Star, Regular, Union };
    Type type = Type::Line;

    CounterexampleParams params;                 // counterexample
    long long n = 0;                             // counterexample / er / line / regular
    GraphMode mode = GraphMode::Regular;         // counterexample
    double p = 0;                                // er
    int leaves = 0;                              // star
    int deg = 0;                                 // regular
    std::uint64_t seed = 0;
    std::vector<GraphSpec> parts;                // union (exactly two)

    // True when the generated edges depend on the seed.
    bool randomized() const;

    nlohmann::json to_json() const;
    static GraphSpec from_json(const nlohmann::json& j);
    static GraphSpec from_file(const std::string& path);
};

// seed_override replaces the spec's seed (per-trial graph resampling); union
// parts receive derived sub-seeds.
Graph build_graph(const GraphSpec& spec, std::optional<std::uint64_t> seed_override = {});

// "n m" header, then one "u v" per line, u < v, ascending. Capped at n <= 10^4.
void write_edge_list(const Graph& g, std::ostream& os);

}  // namespace opdyn
