#include "opdyn/graph_io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace opdyn {

namespace {

GraphSpec::Type type_from_name(const std::string& s) {
    if (s == "counterexample") return GraphSpec::Type::Counterexample;
    if (s == "er") return GraphSpec::Type::Er;
    if (s == "line") return GraphSpec::Type::Line;
    if (s == "star") return GraphSpec::Type::Star;
    if (s == "regular") return GraphSpec::Type::Regular;
    if (s == "union") return GraphSpec::Type::Union;
    throw std::invalid_argument("graph spec: unknown type '" + s + "'");
}

const char* type_name(GraphSpec::Type t) {
    switch (t) {
        case GraphSpec::Type::Counterexample: return "counterexample";
        case GraphSpec::Type::Er: return "er";
        case GraphSpec::Type::Line: return "line";
        case GraphSpec::Type::Star: return "star";
        case GraphSpec::Type::Regular: return "regular";
        case GraphSpec::Type::Union: return "union";
    }
    return "?";
}

}  // namespace

bool GraphSpec::randomized() const {
    switch (type) {
        case Type::Counterexample: return mode == GraphMode::Random;
        case Type::Er: return p > 0 && p < 1;
        case Type::Regular: return true;
        case Type::Line:
        case Type::Star: return false;
        case Type::Union:
            for (const auto& part : parts)
                if (part.randomized()) return true;
            return false;
    }
    return false;
}

nlohmann::json GraphSpec::to_json() const {
    nlohmann::json j{{"type", type_name(type)}};
    switch (type) {
        case Type::Counterexample:
            j["mu"] = params.mu;
            j["delta"] = params.delta;
            j["eps1"] = params.eps1;
            j["eps2"] = params.eps2;
            j["d"] = params.d;
            j["n"] = n;
            j["mode"] = graph_mode_name(mode);
            j["seed"] = seed;
            break;
        case Type::Er:
            j["n"] = n;
            j["p"] = p;
            j["seed"] = seed;
            break;
        case Type::Line:
            j["n"] = n;
            break;
        case Type::Star:
            j["leaves"] = leaves;
            break;
        case Type::Regular:
            j["n"] = n;
            j["deg"] = deg;
            j["seed"] = seed;
            break;
        case Type::Union: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& part : parts) arr.push_back(part.to_json());
            j["parts"] = arr;
            break;
        }
    }
    return j;
}

GraphSpec GraphSpec::from_json(const nlohmann::json& j) {
    GraphSpec s;
    s.type = type_from_name(j.at("type").get<std::string>());
    switch (s.type) {
        case Type::Counterexample: {
            s.params.mu = j.at("mu").get<double>();
            s.params.delta = j.at("delta").get<double>();
            s.params.eps1 = j.at("eps1").get<double>();
            s.params.eps2 = j.at("eps2").get<double>();
            s.params.d = j.at("d").get<double>();
            s.n = j.at("n").get<long long>();
            const auto m = j.value("mode", std::string("regular"));
            if (m == "regular") s.mode = GraphMode::Regular;
            else if (m == "random") s.mode = GraphMode::Random;
            else throw std::invalid_argument("graph spec: counterexample mode must be random|regular");
            s.seed = j.value("seed", 0ULL);
            break;
        }
        case Type::Er:
            s.n = j.at("n").get<long long>();
            s.p = j.at("p").get<double>();
            s.seed = j.value("seed", 0ULL);
            break;
        case Type::Line:
            s.n = j.at("n").get<long long>();
            break;
        case Type::Star:
            s.leaves = j.at("leaves").get<int>();
            break;
        case Type::Regular:
            s.n = j.at("n").get<long long>();
            s.deg = j.at("deg").get<int>();
            s.seed = j.value("seed", 0ULL);
            break;
        case Type::Union: {
            const auto& arr = j.at("parts");
            if (!arr.is_array() || arr.size() != 2)
                throw std::invalid_argument("graph spec: union needs exactly two parts");
            for (const auto& part : arr) s.parts.push_back(GraphSpec::from_json(part));
            break;
        }
    }
    return s;
}

GraphSpec GraphSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph spec file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

Graph build_graph(const GraphSpec& spec, std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(spec.seed);
    switch (spec.type) {
        case GraphSpec::Type::Counterexample:
            return generate_counterexample(spec.params, spec.n, spec.mode, seed);
        case GraphSpec::Type::Er:
            return generate_er(static_cast<int>(spec.n), spec.p, seed);
        case GraphSpec::Type::Line:
            return generate_line(static_cast<int>(spec.n));
        case GraphSpec::Type::Star:
            return generate_star(spec.leaves);
        case GraphSpec::Type::Regular:
            return generate_random_regular(static_cast<int>(spec.n), spec.deg, seed);
        case GraphSpec::Type::Union: {
            std::optional<std::uint64_t> s0, s1;
            if (seed_override) {
                s0 = splitmix64(seed ^ 1);
                s1 = splitmix64(seed ^ 2);
            }
            return disjoint_union(build_graph(spec.parts[0], s0), build_graph(spec.parts[1], s1));
        }
    }
    throw std::invalid_argument("build_graph: bad spec");
}

void write_edge_list(const Graph& g, std::ostream& os) {
    if (g.n() > 10000)
        throw infeasible_error("edge-list export capped at n <= 10^4 (n = " +
                               std::to_string(g.n()) + ")");
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < g.n(); ++v)
        for (int u : g.neighbors(v))
            if (u > v) edges.emplace_back(v, u);
    os << g.n() << ' ' << edges.size() << '\n';
    for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
}

}  // namespace opdyn
