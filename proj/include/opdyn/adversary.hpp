#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

// Expert-count rounding mirrors resolve_sizes: |E1| = round((1/2+delta)*mu*n),
// |E| = round(mu*n), |E0| = |E| - |E1|.
struct StrongSizes {
    long long total = 0, e1 = 0, e0 = 0;
};
StrongSizes strong_sizes(long long n, double mu, double delta);

// Named placement strategies. Unused fields stay at their defaults.
//   blocks_I_O                    E1 = I, E0 = O (counterexample graphs only)
//   prefix                        E1 = [0,k1), E0 = [k1,k1+k0)
//   explicit                      verbatim vertex lists
//   star_center_first   (weak)    center of the star + even spread elsewhere
//   ones_on_star        (strong)  E1 inside the star component, E0 outside
//   even_spread         (weak)    greedy minimization of experts per neighborhood
//   random_placement              uniformly random expert sets
//   spread_blocks       (strong)  random block quotas, one label class per
//                                 block, maximally even within-block spacing
//                                 (keeps the Delta oracle tight; D excluded)
struct StrategySpec {
    std::string name;
    long long k1 = 0, k0 = 0;        // prefix
    std::vector<int> e1, e0;         // explicit
    std::uint64_t seed = 0;          // random strategies

    nlohmann::json to_json() const;
    static StrategySpec from_json(const nlohmann::json& j);
};

struct AdversarySpec {
    enum class Kind { Random, Weak, Strong };
    Kind kind = Kind::Random;
    double mu = 0, delta = 0;
    StrategySpec strategy;  // ignored for the random adversary
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    static AdversarySpec from_json(const nlohmann::json& j);
};

// E uniform among size-round(mu*n) subsets, each expert independently joining
// E1 with probability 1/2+delta.
ExpertAssignment random_adversary(const Graph& g, double mu, double delta, std::uint64_t seed);

// E = strategy(graph) with |E| = round(mu*n); partition i.i.d. as above.
ExpertAssignment weak_adversary(const Graph& g, const StrategySpec& strategy, double mu,
                                double delta, std::uint64_t seed);

// Strategy output verbatim after size and disjointness validation.
ExpertAssignment strong_adversary(const Graph& g, const StrategySpec& strategy, double mu,
                                  double delta);

// Dispatch on spec.kind; seed_override replaces spec.seed (used per trial).
ExpertAssignment apply_adversary(const Graph& g, const AdversarySpec& spec,
                                 std::optional<std::uint64_t> seed_override = {});

// ---------------------------------------------------------------------------
// Exact evaluation over the coin randomness
// ---------------------------------------------------------------------------

struct ExactProbs {
    double one = 0, zero = 0, nostrict = 0;
};

// Exact outcome distribution for a fixed assignment, enumerating tie coins
// round by round (cap: 20 enumerated coins per path) and convolving terminal
// independent coins through their binomial sum.
ExactProbs exact_outcome_probabilities(const Graph& g, const ExpertAssignment& a, Mode mode);

struct SearchResult {
    ExpertAssignment worst;
    double min_success = 1.0;  // minimal P(OneMajority) over all assignments
    ExactProbs probs_at_worst;
};

// Brute force over every (E, E1) of the strong sizes. Hard cap n <= 16;
// random-mode graphs are rejected (the oracle needs a fixed graph).
SearchResult exhaustive_strong_search(const Graph& g, double mu, double delta, Mode mode);

// Assignment file format: "E1: v v ...\nE0: v v ...\n", 0-indexed.
void write_assignment(std::ostream& os, const ExpertAssignment& a);
ExpertAssignment parse_assignment(std::istream& is);

}  // namespace opdyn
