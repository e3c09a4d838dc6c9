#include "opdyn/adversary.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "opdyn/concentration.hpp"

namespace opdyn {

StrongSizes strong_sizes(long long n, double mu, double delta) {
    StrongSizes s;
    s.total = round_half_up(mu * static_cast<double>(n));
    s.e1 = round_half_up((0.5 + delta) * mu * static_cast<double>(n));
    s.e0 = s.total - s.e1;
    if (s.total < 0 || s.total > n || s.e1 < 0 || s.e0 < 0)
        throw std::invalid_argument("strong_sizes: infeasible expert counts");
    return s;
}

namespace {

void check_mu_delta(double mu, double delta) {
    if (!(mu > 0 && mu <= 1)) throw std::invalid_argument("adversary: mu outside (0,1]");
    if (!(delta > 0 && delta <= 0.5)) throw std::invalid_argument("adversary: delta outside (0,1/2]");
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// i.i.d. partition of E: each expert lands in E1 with probability 1/2+delta.
ExpertAssignment partition_experts(const std::vector<int>& experts, double delta, Rng& rng) {
    ExpertAssignment a;
    for (int v : experts) {
        if (rng.bernoulli(0.5 + delta)) a.e1.push_back(v);
        else a.e0.push_back(v);
    }
    a.e1 = sorted(std::move(a.e1));
    a.e0 = sorted(std::move(a.e0));
    return a;
}

// c maximally even positions in [0, m): floor(k*m/c) for k = 0..c-1.
std::vector<long long> lattice_positions(long long m, long long c) {
    std::vector<long long> out;
    out.reserve(c);
    for (long long k = 0; k < c; ++k) out.push_back(k * m / c);
    return out;
}

int find_center(const Graph& g) {
    int center = 0;
    long long best = -1;
    for (int v = 0; v < g.n(); ++v) {
        const long long d = g.degree(v);
        if (d > best) {
            best = d;
            center = v;
        }
    }
    return center;
}

std::vector<bool> component_of(const Graph& g, int start) {
    std::vector<bool> in(g.n(), false);
    std::queue<int> q;
    q.push(start);
    in[start] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : g.neighbors(v)) {
            if (!in[u]) {
                in[u] = true;
                q.push(u);
            }
        }
    }
    return in;
}

// Greedy even spread: repeatedly pick the vertex whose closed neighborhood is
// least loaded with experts so far.
std::vector<int> even_spread_set(const Graph& g, long long k) {
    const int n = g.n();
    std::vector<int> cover(n, 0);  // experts in N[u]
    std::vector<bool> expert(n, false);
    std::vector<int> chosen;
    chosen.reserve(k);
    for (long long t = 0; t < k; ++t) {
        int best = -1;
        long long best_max = -1, best_sum = 0;
        for (int v = 0; v < n; ++v) {
            if (expert[v]) continue;
            long long mx = cover[v], sum = cover[v];
            for (int u : g.explicit_neighbors(v)) {
                mx = std::max<long long>(mx, cover[u]);
                sum += cover[u];
            }
            if (best == -1 || mx < best_max || (mx == best_max && sum < best_sum)) {
                best = v;
                best_max = mx;
                best_sum = sum;
            }
        }
        if (best == -1) throw std::invalid_argument("even_spread: not enough vertices");
        expert[best] = true;
        chosen.push_back(best);
        ++cover[best];
        for (int u : g.explicit_neighbors(best)) ++cover[u];
    }
    return sorted(std::move(chosen));
}

// Weak strategies: an expert set of the requested size.
std::vector<int> weak_strategy_set(const Graph& g, const StrategySpec& s, long long k,
                                   std::uint64_t seed) {
    const int n = g.n();
    if (k > n) throw std::invalid_argument("weak strategy: expert count exceeds n");
    if (s.name == "random_placement") {
        Rng rng(seed);
        return sorted(rng.sample(n, static_cast<int>(k)));
    }
    if (s.name == "prefix") {
        std::vector<int> out;
        for (long long v = 0; v < k; ++v) out.push_back(static_cast<int>(v));
        return out;
    }
    if (s.name == "even_spread") return even_spread_set(g, k);
    if (s.name == "star_center_first") {
        if (k < 1) return {};
        const int center = find_center(g);
        const auto in_star = component_of(g, center);
        std::vector<int> outside, inside;
        for (int v = 0; v < n; ++v) {
            if (v == center) continue;
            (in_star[v] ? inside : outside).push_back(v);
        }
        std::vector<int> chosen{center};
        const long long rest = k - 1;
        const long long from_outside = std::min<long long>(rest, outside.size());
        for (long long pos : lattice_positions(static_cast<long long>(outside.size()), from_outside))
            chosen.push_back(outside[pos]);
        const long long overflow = rest - from_outside;
        for (long long pos : lattice_positions(static_cast<long long>(inside.size()), overflow))
            chosen.push_back(inside[pos]);
        if (static_cast<long long>(chosen.size()) != k)
            throw std::invalid_argument("star_center_first: not enough vertices");
        return sorted(std::move(chosen));
    }
    throw std::invalid_argument("unknown weak strategy: " + s.name);
}

// Strong strategies: both expert sets.
ExpertAssignment strong_strategy_sets(const Graph& g, const StrategySpec& s,
                                      const StrongSizes& sizes) {
    const int n = g.n();
    ExpertAssignment a;
    if (s.name == "explicit") {
        a.e1 = sorted(s.e1);
        a.e0 = sorted(s.e0);
        return a;
    }
    if (s.name == "prefix") {
        for (long long v = 0; v < s.k1; ++v) a.e1.push_back(static_cast<int>(v));
        for (long long v = s.k1; v < s.k1 + s.k0; ++v) a.e0.push_back(static_cast<int>(v));
        return a;
    }
    if (s.name == "blocks_I_O") {
        if (!g.blocks())
            throw std::invalid_argument("blocks_I_O: graph has no block structure");
        const auto& layout = *g.blocks();
        for (long long v = layout.begin(Block::I); v < layout.end(Block::I); ++v)
            a.e1.push_back(static_cast<int>(v));
        for (long long v = layout.begin(Block::O); v < layout.end(Block::O); ++v)
            a.e0.push_back(static_cast<int>(v));
        return a;
    }
    if (s.name == "random_placement") {
        Rng rng(s.seed);
        auto sample = rng.sample(n, static_cast<int>(sizes.total));
        a.e1 = sorted({sample.begin(), sample.begin() + sizes.e1});
        a.e0 = sorted({sample.begin() + sizes.e1, sample.end()});
        return a;
    }
    if (s.name == "ones_on_star") {
        const auto in_star = component_of(g, find_center(g));
        for (int v = 0; v < n && static_cast<long long>(a.e1.size()) < sizes.e1; ++v)
            if (in_star[v]) a.e1.push_back(v);
        if (static_cast<long long>(a.e1.size()) < sizes.e1)
            throw std::invalid_argument("ones_on_star: star component smaller than |E1|");
        for (int v = 0; v < n && static_cast<long long>(a.e0.size()) < sizes.e0; ++v)
            if (!in_star[v]) a.e0.push_back(v);
        if (static_cast<long long>(a.e0.size()) < sizes.e0)
            throw std::invalid_argument("ones_on_star: not enough vertices outside the star");
        return a;
    }
    if (s.name == "spread_blocks") {
        if (!g.blocks())
            throw std::invalid_argument("spread_blocks: graph has no block structure");
        const auto& layout = *g.blocks();
        Rng rng(s.seed);
        // Core blocks only; D stays expert-free so the Delta oracle's D error
        // term never fires.
        const Block core[4] = {Block::I, Block::J, Block::O, Block::P};
        std::vector<Block> homes;
        for (Block b : core)
            if (layout.size(b) >= sizes.e0) homes.push_back(b);
        if (homes.empty()) throw std::invalid_argument("spread_blocks: |E0| exceeds every block");
        const Block home = homes[rng.index(homes.size())];

        // E1 quotas: uniform sample over the other core blocks' vertices.
        std::vector<Block> pool_blocks;
        long long pool = 0;
        for (Block b : core)
            if (b != home) {
                pool_blocks.push_back(b);
                pool += layout.size(b);
            }
        if (pool < sizes.e1) throw std::invalid_argument("spread_blocks: |E1| exceeds capacity");
        auto pick = rng.sample(static_cast<int>(pool), static_cast<int>(sizes.e1));
        long long quota[kNumBlocks] = {0, 0, 0, 0, 0};
        for (int x : pick) {
            long long acc = 0;
            for (Block b : pool_blocks) {
                if (x < acc + layout.size(b)) {
                    ++quota[static_cast<int>(b)];
                    break;
                }
                acc += layout.size(b);
            }
        }
        for (Block b : pool_blocks)
            for (long long pos : lattice_positions(layout.size(b), quota[static_cast<int>(b)]))
                a.e1.push_back(static_cast<int>(layout.begin(b) + pos));
        for (long long pos : lattice_positions(layout.size(home), sizes.e0))
            a.e0.push_back(static_cast<int>(layout.begin(home) + pos));
        a.e1 = sorted(std::move(a.e1));
        a.e0 = sorted(std::move(a.e0));
        return a;
    }
    throw std::invalid_argument("unknown strong strategy: " + s.name);
}

}  // namespace

ExpertAssignment random_adversary(const Graph& g, double mu, double delta, std::uint64_t seed) {
    check_mu_delta(mu, delta);
    const long long k = round_half_up(mu * g.n());
    if (k > g.n()) throw std::invalid_argument("random_adversary: round(mu*n) > n");
    Rng rng(seed);
    const auto experts = rng.sample(g.n(), static_cast<int>(k));
    auto a = partition_experts(experts, delta, rng);
    a.validate(g.n());
    return a;
}

ExpertAssignment weak_adversary(const Graph& g, const StrategySpec& strategy, double mu,
                                double delta, std::uint64_t seed) {
    check_mu_delta(mu, delta);
    const long long k = round_half_up(mu * g.n());
    // Independent streams for the strategy's own randomness and the partition.
    Rng partition_rng(splitmix64(seed ^ 0x7061727469ULL));
    const auto set = weak_strategy_set(g, strategy, k, splitmix64(seed ^ 0x736574ULL));
    if (static_cast<long long>(set.size()) != k)
        throw std::invalid_argument("weak adversary: strategy produced " +
                                    std::to_string(set.size()) + " experts, expected " +
                                    std::to_string(k));
    auto a = partition_experts(set, delta, partition_rng);
    a.validate(g.n());
    return a;
}

ExpertAssignment strong_adversary(const Graph& g, const StrategySpec& strategy, double mu,
                                  double delta) {
    check_mu_delta(mu, delta);
    const StrongSizes sizes = strong_sizes(g.n(), mu, delta);
    auto a = strong_strategy_sets(g, strategy, sizes);
    if (static_cast<long long>(a.e1.size()) != sizes.e1 ||
        static_cast<long long>(a.e0.size()) != sizes.e0) {
        throw std::invalid_argument(
            "strong adversary: strategy sizes (|E1| = " + std::to_string(a.e1.size()) +
            ", |E0| = " + std::to_string(a.e0.size()) + ") do not match round((1/2+delta)*mu*n) = " +
            std::to_string(sizes.e1) + " and remainder " + std::to_string(sizes.e0));
    }
    a.validate(g.n());
    return a;
}

ExpertAssignment apply_adversary(const Graph& g, const AdversarySpec& spec,
                                 std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(spec.seed);
    switch (spec.kind) {
        case AdversarySpec::Kind::Random:
            return random_adversary(g, spec.mu, spec.delta, seed);
        case AdversarySpec::Kind::Weak:
            return weak_adversary(g, spec.strategy, spec.mu, spec.delta, seed);
        case AdversarySpec::Kind::Strong: {
            StrategySpec s = spec.strategy;
            s.seed = seed;
            return strong_adversary(g, s, spec.mu, spec.delta);
        }
    }
    throw std::invalid_argument("apply_adversary: bad kind");
}

// ---------------------------------------------------------------------------
// Exact probabilities
// ---------------------------------------------------------------------------

namespace {

constexpr int kCoinCap = 20;

void classify(ExactProbs& acc, double weight, long long ones, long long zeros, long long n) {
    if (2 * ones > n) acc.one += weight;
    else if (2 * zeros > n) acc.zero += weight;
    else acc.nostrict += weight;
}

// ones/zeros so far plus c independent fair coins.
void convolve_terminal_coins(ExactProbs& acc, double weight, long long ones, long long zeros,
                             long long c, long long n) {
    for (long long x = 0; x <= c; ++x)
        classify(acc, weight * binomial_pmf(c, 0.5, x), ones + x, zeros + (c - x), n);
}

struct IterState {
    std::vector<Label> labels;
    std::vector<int> cnt1, cnt0;  // labeled explicit neighbors, start of round
    long long tally1[kNumBlocks] = {0, 0, 0, 0, 0};
    long long tally0[kNumBlocks] = {0, 0, 0, 0, 0};
    std::vector<int> unlabeled;
    long long ones = 0, zeros = 0;
};

void iter_commit(const Graph& g, IterState& st, const std::vector<int>& newly) {
    const auto& blocks = g.blocks();
    for (int u : newly) {
        const bool one = st.labels[u] == Label::One;
        if (blocks) {
            const int b = static_cast<int>(blocks->block_of(u));
            (one ? st.tally1[b] : st.tally0[b]) += 1;
        }
        auto* cnt = one ? st.cnt1.data() : st.cnt0.data();
        for (int w : g.explicit_neighbors(u)) ++cnt[w];
    }
}

// Enumerates one round; branches on tie coins, shortcuts stalls through the
// binomial convolution.
void iter_dfs(const Graph& g, IterState st, double weight, int coins_on_path, ExactProbs& acc) {
    const long long n = g.n();
    const auto& blocks = g.blocks();
    while (!st.unlabeled.empty()) {
        long long imp1[kNumBlocks] = {0, 0, 0, 0, 0};
        long long imp0[kNumBlocks] = {0, 0, 0, 0, 0};
        if (blocks) {
            for (int b = 0; b < kNumBlocks; ++b)
                for (int x = 0; x < kNumBlocks; ++x)
                    if (implicit_blocks_adjacent(static_cast<Block>(b), static_cast<Block>(x))) {
                        imp1[b] += st.tally1[x];
                        imp0[b] += st.tally0[x];
                    }
        }
        std::vector<int> det_one, det_zero, ties, survivors;
        for (int v : st.unlabeled) {
            long long a = st.cnt1[v], b = st.cnt0[v];
            if (blocks) {
                const int bb = static_cast<int>(blocks->block_of(v));
                a += imp1[bb];
                b += imp0[bb];
            }
            if (a > b) det_one.push_back(v);
            else if (a < b) det_zero.push_back(v);
            else if (a > 0) ties.push_back(v);
            else survivors.push_back(v);
        }

        if (det_one.empty() && det_zero.empty() && ties.empty()) {
            // Stall; survivors have no labeled neighbors, coins are i.i.d.
            convolve_terminal_coins(acc, weight, st.ones, st.zeros,
                                    static_cast<long long>(survivors.size()), n);
            return;
        }

        if (!ties.empty()) {
            const int t = static_cast<int>(ties.size());
            if (coins_on_path + t > kCoinCap)
                throw infeasible_error("exact_outcome_probabilities: coin enumeration cap exceeded");
            const double w = weight / std::ldexp(1.0, t);
            for (std::uint32_t mask = 0; mask < (1u << t); ++mask) {
                IterState next = st;
                std::vector<int> newly = det_one;
                newly.insert(newly.end(), det_zero.begin(), det_zero.end());
                for (int v : det_one) next.labels[v] = Label::One;
                for (int v : det_zero) next.labels[v] = Label::Zero;
                for (int i = 0; i < t; ++i) {
                    const Label lab = (mask >> i) & 1 ? Label::One : Label::Zero;
                    next.labels[ties[i]] = lab;
                    newly.push_back(ties[i]);
                }
                long long add1 = 0, add0 = 0;
                for (int v : newly) (next.labels[v] == Label::One ? add1 : add0) += 1;
                next.ones = st.ones + add1;
                next.zeros = st.zeros + add0;
                next.unlabeled = survivors;
                if (!next.unlabeled.empty()) iter_commit(g, next, newly);
                iter_dfs(g, std::move(next), w, coins_on_path + t, acc);
            }
            return;
        }

        // Deterministic round; advance in place.
        for (int v : det_one) st.labels[v] = Label::One;
        for (int v : det_zero) st.labels[v] = Label::Zero;
        st.ones += static_cast<long long>(det_one.size());
        st.zeros += static_cast<long long>(det_zero.size());
        std::vector<int> newly = det_one;
        newly.insert(newly.end(), det_zero.begin(), det_zero.end());
        st.unlabeled = std::move(survivors);
        if (!st.unlabeled.empty()) iter_commit(g, st, newly);
    }
    classify(acc, weight, st.ones, st.zeros, n);
}

}  // namespace

ExactProbs exact_outcome_probabilities(const Graph& g, const ExpertAssignment& a, Mode mode) {
    a.validate(g.n());
    ExactProbs acc;
    if (mode == Mode::NonIterative) {
        const auto deltas = delta_all(g, a);
        std::vector<std::uint8_t> expert(g.n(), 0);
        for (int v : a.e1) expert[v] = 1;
        for (int v : a.e0) expert[v] = 1;
        long long ones = static_cast<long long>(a.e1.size());
        long long zeros = static_cast<long long>(a.e0.size());
        long long coins = 0;
        for (int v = 0; v < g.n(); ++v) {
            if (expert[v]) continue;
            if (deltas[v] > 0) ++ones;
            else if (deltas[v] < 0) ++zeros;
            else ++coins;
        }
        convolve_terminal_coins(acc, 1.0, ones, zeros, coins, g.n());
        return acc;
    }

    IterState st;
    st.labels.assign(g.n(), Label::Unlabeled);
    st.cnt1.assign(g.n(), 0);
    st.cnt0.assign(g.n(), 0);
    for (int v : a.e1) st.labels[v] = Label::One;
    for (int v : a.e0) st.labels[v] = Label::Zero;
    st.ones = static_cast<long long>(a.e1.size());
    st.zeros = static_cast<long long>(a.e0.size());
    for (int v = 0; v < g.n(); ++v)
        if (st.labels[v] == Label::Unlabeled) st.unlabeled.push_back(v);
    std::vector<int> initial(a.e1);
    initial.insert(initial.end(), a.e0.begin(), a.e0.end());
    if (!st.unlabeled.empty()) iter_commit(g, st, initial);
    iter_dfs(g, std::move(st), 1.0, 0, acc);
    return acc;
}

SearchResult exhaustive_strong_search(const Graph& g, double mu, double delta, Mode mode) {
    const int n = g.n();
    if (n > 16) throw infeasible_error("exhaustive_strong_search: n > 16");
    if (g.mode() == GraphMode::Random)
        throw std::invalid_argument("exhaustive_strong_search: graph was randomly generated; "
                                    "the oracle needs a deterministic graph");
    check_mu_delta(mu, delta);
    const StrongSizes sizes = strong_sizes(n, mu, delta);

    // Lexicographic enumeration of k-subsets as index vectors.
    auto first_comb = [](int k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        return idx;
    };
    auto next_comb = [](std::vector<int>& idx, int m) {
        const int k = static_cast<int>(idx.size());
        for (int i = k - 1; i >= 0; --i) {
            if (idx[i] < m - k + i) {
                ++idx[i];
                for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    SearchResult best;
    bool have = false;
    const int k = static_cast<int>(sizes.total);
    const int k1 = static_cast<int>(sizes.e1);
    std::vector<int> experts = first_comb(k);
    do {
        std::vector<int> pick = first_comb(k1);
        do {
            ExpertAssignment a;
            std::vector<bool> in_e1(k, false);
            for (int i : pick) in_e1[i] = true;
            for (int i = 0; i < k; ++i)
                (in_e1[i] ? a.e1 : a.e0).push_back(experts[i]);
            const ExactProbs probs = exact_outcome_probabilities(g, a, mode);
            if (!have || probs.one < best.min_success) {
                have = true;
                best.worst = a;
                best.min_success = probs.one;
                best.probs_at_worst = probs;
            }
        } while (next_comb(pick, k));
    } while (next_comb(experts, n));

    if (!have) throw std::invalid_argument("exhaustive_strong_search: no assignment of the given sizes");
    return best;
}

// ---------------------------------------------------------------------------
// Assignment files
// ---------------------------------------------------------------------------

void write_assignment(std::ostream& os, const ExpertAssignment& a) {
    os << "E1:";
    for (int v : a.e1) os << ' ' << v;
    os << "\nE0:";
    for (int v : a.e0) os << ' ' << v;
    os << '\n';
}

ExpertAssignment parse_assignment(std::istream& is) {
    ExpertAssignment a;
    std::string line;
    bool saw1 = false, saw0 = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        std::vector<int>* dst = nullptr;
        if (tag == "E1:") {
            dst = &a.e1;
            saw1 = true;
        } else if (tag == "E0:") {
            dst = &a.e0;
            saw0 = true;
        } else {
            throw std::invalid_argument("assignment file: unexpected line tag '" + tag + "'");
        }
        int v;
        while (ls >> v) dst->push_back(v);
    }
    if (!saw1 || !saw0) throw std::invalid_argument("assignment file: missing E1/E0 line");
    std::sort(a.e1.begin(), a.e1.end());
    std::sort(a.e0.begin(), a.e0.end());
    return a;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json StrategySpec::to_json() const {
    nlohmann::json j{{"name", name}};
    if (name == "prefix") {
        j["k1"] = k1;
        j["k0"] = k0;
    }
    if (name == "explicit") {
        j["e1"] = e1;
        j["e0"] = e0;
    }
    if (name == "random_placement" || name == "spread_blocks") j["seed"] = seed;
    return j;
}

StrategySpec StrategySpec::from_json(const nlohmann::json& j) {
    StrategySpec s;
    s.name = j.at("name").get<std::string>();
    s.k1 = j.value("k1", 0LL);
    s.k0 = j.value("k0", 0LL);
    if (j.contains("e1")) s.e1 = j.at("e1").get<std::vector<int>>();
    if (j.contains("e0")) s.e0 = j.at("e0").get<std::vector<int>>();
    s.seed = j.value("seed", 0ULL);
    return s;
}

nlohmann::json AdversarySpec::to_json() const {
    const char* k = kind == Kind::Random ? "random" : (kind == Kind::Weak ? "weak" : "strong");
    nlohmann::json j{{"kind", k}, {"mu", mu}, {"delta", delta}, {"seed", seed}};
    if (kind != Kind::Random) j["strategy"] = strategy.to_json();
    return j;
}

AdversarySpec AdversarySpec::from_json(const nlohmann::json& j) {
    AdversarySpec s;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "random") s.kind = Kind::Random;
    else if (kind == "weak") s.kind = Kind::Weak;
    else if (kind == "strong") s.kind = Kind::Strong;
    else throw std::invalid_argument("adversary spec: unknown kind '" + kind + "'");
    s.mu = j.at("mu").get<double>();
    s.delta = j.at("delta").get<double>();
    s.seed = j.value("seed", 0ULL);
    if (j.contains("strategy")) s.strategy = StrategySpec::from_json(j.at("strategy"));
    else if (s.kind != Kind::Random)
        throw std::invalid_argument("adversary spec: weak/strong kinds need a strategy");
    return s;
}

}  // namespace opdyn
