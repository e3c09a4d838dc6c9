#include "opdyn/graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace opdyn {

namespace {

// Strict "<" with a relative guard so boundary equality under floating-point
// noise is classified as "not strictly less".
bool strictly_less(double a, double b) {
    double scale = std::max(std::fabs(a), std::fabs(b));
    return a < b && (b - a) > 1e-12 * scale;
}

void check(std::vector<ParamViolation>& out, const std::string& name, double lhs, double rhs) {
    if (!strictly_less(lhs, rhs)) out.push_back({name, lhs, rhs});
}

}  // namespace

ParamReport validate_params(const CounterexampleParams& q) {
    ParamReport r;
    const double fields[5] = {q.mu, q.delta, q.eps1, q.eps2, q.d};
    const char* names[5] = {"mu", "delta", "eps1", "eps2", "d"};
    for (int i = 0; i < 5; ++i) {
        if (!std::isfinite(fields[i])) {
            r.violations.push_back({std::string(names[i]) + " finite", fields[i], 0});
        }
    }
    if (!r.violations.empty()) return r;

    const double mu = q.mu, delta = q.delta, eps1 = q.eps1, eps2 = q.eps2, d = q.d;
    auto& v = r.violations;

    // Domain.
    check(v, "0 < mu", 0, mu);
    check(v, "mu < 1/2", mu, 0.5);
    check(v, "1/6 < delta", 1.0 / 6.0, delta);
    check(v, "delta < 1/2", delta, 0.5);
    check(v, "0 < eps1", 0, eps1);
    check(v, "0 < eps2", 0, eps2);
    check(v, "0 < d", 0, d);

    const double half_plus = 0.5 + delta;
    // Construction-level bounds; these also keep p_IJ < 1 and p_IP > 0.
    check(v, "eps1 < 2*delta/(1/2+delta)", eps1, 2 * delta / half_plus);
    check(v, "eps2 < (1/2-delta)/(1/2+delta)", eps2, (0.5 - delta) / half_plus);
    check(v, "d < (1-mu-2*delta*mu)/3", d, (1 - mu - 2 * delta * mu) / 3);

    // Assumption (1).
    check(v, "eps1 < delta*mu/2", eps1, delta * mu / 2);
    check(v, "eps1 < 4*delta/(1/2+delta) - 1", eps1, 4 * delta / half_plus - 1);

    // Assumption (2); the third branch coincides with the construction bound.
    check(v, "d < eps1*delta/(1/2+delta)", d, eps1 * delta / half_plus);
    check(v, "d < eps1*delta*mu/4", d, eps1 * delta * mu / 4);

    // Assumption (3).
    check(v, "eps2 < (d/6)*(4*delta/(1/2+delta) - 1 - eps1)", eps2,
          (d / 6) * (4 * delta / half_plus - 1 - eps1));
    check(v, "eps2 < (1/2-delta)/(1+2*delta)", eps2, (0.5 - delta) / (1 + 2 * delta));

    return r;
}

BlockSizes resolve_sizes(const CounterexampleParams& q, long long n) {
    if (n <= 0) throw infeasible_error("resolve_sizes: empty graph (n = " + std::to_string(n) + ")");
    BlockSizes s;
    s.size_i = round_half_up(q.mu * (0.5 + q.delta) * static_cast<double>(n));
    const long long experts = round_half_up(q.mu * static_cast<double>(n));
    s.size_o = experts - s.size_i;  // remainder keeps size_i + size_o = round(mu*n)
    s.size_d = round_half_up(q.d * static_cast<double>(n));
    if ((n - s.size_d) % 2 != 0) s.size_d += 1;
    const long long half = (n - s.size_d) / 2;
    s.size_j = half - s.size_i;
    s.size_p = half - s.size_o;
    if (s.size_i < 0 || s.size_j < 0 || s.size_o < 0 || s.size_p < 0 || s.size_d < 0)
        throw infeasible_error("resolve_sizes: negative block size at n = " + std::to_string(n));
    if (s.size_d > s.size_j)
        throw infeasible_error("resolve_sizes: size_D (" + std::to_string(s.size_d) +
                               ") exceeds size_J (" + std::to_string(s.size_j) + ")");
    assert(s.total() == n);
    return s;
}

bool implicit_blocks_adjacent(Block x, Block y) {
    if (x == Block::D || y == Block::D) return false;
    if (x == y) return true;                      // cliques
    return x == Block::O || y == Block::O;        // O joined to all non-D
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

void Graph::build_csr(const std::vector<std::pair<int, int>>& edges) {
    row_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& [u, v] : edges) {
        assert(u != v && u >= 0 && v >= 0 && u < n_ && v < n_);
        ++row_[u + 1];
        ++row_[v + 1];
    }
    for (int i = 0; i < n_; ++i) row_[i + 1] += row_[i];
    adj_.resize(static_cast<std::size_t>(row_[n_]));
    std::vector<long long> fill(row_.begin(), row_.end() - 1);
    for (const auto& [u, v] : edges) {
        adj_[fill[u]++] = v;
        adj_[fill[v]++] = u;
    }
    for (int i = 0; i < n_; ++i)
        std::sort(adj_.begin() + row_[i], adj_.begin() + row_[i + 1]);
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges, GraphMode mode) {
    Graph g;
    g.n_ = n;
    g.mode_ = mode;
    g.build_csr(edges);
    return g;
}

Graph Graph::with_blocks(const BlockLayout& layout,
                         const std::vector<std::pair<int, int>>& cross_edges, GraphMode mode) {
    Graph g;
    g.n_ = static_cast<int>(layout.n());
    g.mode_ = mode;
    g.blocks_ = layout;
    g.build_csr(cross_edges);
    return g;
}

bool Graph::adjacent(int u, int v) const {
    if (u == v) return false;
    if (blocks_ && implicit_blocks_adjacent(blocks_->block_of(u), blocks_->block_of(v)))
        return true;
    auto nb = explicit_neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

long long Graph::degree(int v) const {
    long long deg = row_[v + 1] - row_[v];
    if (blocks_) {
        const Block bv = blocks_->block_of(v);
        for (int b = 0; b < kNumBlocks; ++b) {
            if (implicit_blocks_adjacent(bv, static_cast<Block>(b)))
                deg += blocks_->size(static_cast<Block>(b));
        }
        if (implicit_blocks_adjacent(bv, bv)) deg -= 1;  // exclude v itself
    }
    return deg;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    if (blocks_) {
        const Block bv = blocks_->block_of(v);
        for (int b = 0; b < kNumBlocks; ++b) {
            if (!implicit_blocks_adjacent(bv, static_cast<Block>(b))) continue;
            for (long long u = blocks_->begin(static_cast<Block>(b));
                 u < blocks_->end(static_cast<Block>(b)); ++u) {
                if (u != v) out.push_back(static_cast<int>(u));
            }
        }
    }
    auto nb = explicit_neighbors(v);
    out.insert(out.end(), nb.begin(), nb.end());
    std::sort(out.begin(), out.end());
    return out;
}

long long Graph::edge_count() const {
    long long total = explicit_edge_count();
    if (blocks_) {
        long long implicit_deg_sum = 0;
        for (int x = 0; x < kNumBlocks; ++x) {
            const Block bx = static_cast<Block>(x);
            long long deg = 0;
            for (int y = 0; y < kNumBlocks; ++y)
                if (implicit_blocks_adjacent(bx, static_cast<Block>(y)))
                    deg += blocks_->size(static_cast<Block>(y));
            if (implicit_blocks_adjacent(bx, bx)) deg -= 1;
            implicit_deg_sum += deg * blocks_->size(bx);
        }
        total += implicit_deg_sum / 2;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace regular_detail {

bool x_is_arc_side(long long sz_x, long long sz_y, double p) {
    // Arc length error lands on the opposite side scaled by |A|/|B|.
    auto rounding_err = [](double x) { return std::fabs(static_cast<double>(round_half_up(x)) - x); };
    const double err_if_x = rounding_err(p * static_cast<double>(sz_y)) *
                            (static_cast<double>(sz_x) / static_cast<double>(sz_y));
    const double err_if_y = rounding_err(p * static_cast<double>(sz_x)) *
                            (static_cast<double>(sz_y) / static_cast<double>(sz_x));
    return err_if_x <= err_if_y;
}

Arc arc_of(long long i, long long sz_a, long long sz_b, double p) {
    Arc a;
    a.len = std::min<long long>(round_half_up(p * static_cast<double>(sz_b)), sz_b);
    a.start = ((i * sz_b + sz_a - 1) / sz_a) % sz_b;  // ceil(i*|B|/|A|)
    return a;
}

}  // namespace regular_detail

namespace {

void append_regular_pair(std::vector<std::pair<int, int>>& edges, const BlockLayout& layout,
                         Block x, Block y, double p) {
    const long long sz_x = layout.size(x), sz_y = layout.size(y);
    if (sz_x == 0 || sz_y == 0) return;
    Block a = x, b = y;
    if (!regular_detail::x_is_arc_side(sz_x, sz_y, p)) std::swap(a, b);
    const long long sz_a = layout.size(a), sz_b = layout.size(b);
    const long long off_a = layout.begin(a), off_b = layout.begin(b);
    for (long long i = 0; i < sz_a; ++i) {
        const auto arc = regular_detail::arc_of(i, sz_a, sz_b, p);
        for (long long k = 0; k < arc.len; ++k) {
            const long long j = (arc.start + k) % sz_b;
            edges.emplace_back(static_cast<int>(off_a + i), static_cast<int>(off_b + j));
        }
    }
}

void append_random_pair(std::vector<std::pair<int, int>>& edges, const BlockLayout& layout,
                        Block x, Block y, double p, Rng& rng) {
    const long long off_x = layout.begin(x), off_y = layout.begin(y);
    for (long long i = 0; i < layout.size(x); ++i)
        for (long long j = 0; j < layout.size(y); ++j)
            if (rng.bernoulli(p))
                edges.emplace_back(static_cast<int>(off_x + i), static_cast<int>(off_y + j));
}

}  // namespace

Graph generate_counterexample(const CounterexampleParams& params, long long n, GraphMode mode,
                              std::uint64_t seed) {
    if (mode == GraphMode::Explicit)
        throw std::invalid_argument("generate_counterexample: mode must be random or regular");
    const BlockLayout layout(resolve_sizes(params, n));

    std::vector<std::pair<int, int>> edges;
    const double expected =
        params.p_ij() * static_cast<double>(layout.size(Block::I) * layout.size(Block::J)) +
        params.p_ip() * static_cast<double>(layout.size(Block::I) * layout.size(Block::P)) +
        params.p_jp() * static_cast<double>(layout.size(Block::J) * layout.size(Block::P));
    edges.reserve(static_cast<std::size_t>(expected * 1.02) + layout.size(Block::D) + 16);

    if (mode == GraphMode::Regular) {
        append_regular_pair(edges, layout, Block::I, Block::J, params.p_ij());
        append_regular_pair(edges, layout, Block::I, Block::P, params.p_ip());
        append_regular_pair(edges, layout, Block::J, Block::P, params.p_jp());
    } else {
        Rng rng(seed);
        append_random_pair(edges, layout, Block::I, Block::J, params.p_ij(), rng);
        append_random_pair(edges, layout, Block::I, Block::P, params.p_ip(), rng);
        append_random_pair(edges, layout, Block::J, Block::P, params.p_jp(), rng);
    }
    // D-vertex k is matched to the k-th vertex of J.
    for (long long k = 0; k < layout.size(Block::D); ++k)
        edges.emplace_back(static_cast<int>(layout.begin(Block::D) + k),
                           static_cast<int>(layout.begin(Block::J) + k));

    return Graph::with_blocks(layout, edges, mode);
}

Graph generate_er(int n, double p, std::uint64_t seed) {
    if (p < 0 || p > 1) throw std::invalid_argument("generate_er: p outside [0,1]");
    if (n < 0) throw std::invalid_argument("generate_er: negative n");
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges, GraphMode::Random);
}

Graph generate_line(int n) {
    if (n < 1) throw std::invalid_argument("generate_line: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

Graph generate_star(int leaves) {
    if (leaves < 1) throw std::invalid_argument("generate_star: leaves must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, edges);
}

Graph generate_random_regular(int n, int deg, std::uint64_t seed) {
    if (deg < 0 || deg >= n) throw std::invalid_argument("generate_random_regular: need 0 <= deg < n");
    if ((static_cast<long long>(n) * deg) % 2 != 0)
        throw infeasible_error("generate_random_regular: n*deg is odd");
    Rng rng(seed);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::vector<bool>> hit;  // small n expected; adjacency matrix is fine
        hit.assign(n, std::vector<bool>(n, false));
        std::vector<std::pair<int, int>> edges;
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * deg);
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < deg; ++k) stubs.push_back(v);

        bool stuck = false;
        while (!stubs.empty() && !stuck) {
            // Shuffle and pair consecutive stubs; collisions retry next round.
            for (std::size_t i = stubs.size(); i > 1; --i)
                std::swap(stubs[i - 1], stubs[rng.index(i)]);
            std::vector<int> leftovers;
            bool progress = false;
            for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
                int u = stubs[i], v = stubs[i + 1];
                if (u == v || hit[u][v]) {
                    leftovers.push_back(u);
                    leftovers.push_back(v);
                } else {
                    hit[u][v] = hit[v][u] = true;
                    edges.emplace_back(u, v);
                    progress = true;
                }
            }
            if (!progress) stuck = true;
            stubs = std::move(leftovers);
        }
        if (!stuck && stubs.empty()) return Graph::from_edges(n, edges, GraphMode::Random);
    }
    throw infeasible_error("generate_random_regular: no simple matching found");
}

Graph disjoint_union(const Graph& g1, const Graph& g2) {
    const int n1 = g1.n(), n2 = g2.n();
    std::vector<std::pair<int, int>> edges;
    auto add_all = [&edges](const Graph& g, int shift) {
        for (int v = 0; v < g.n(); ++v)
            for (int u : g.neighbors(v))
                if (u > v) edges.emplace_back(v + shift, u + shift);
    };
    add_all(g1, 0);
    add_all(g2, n1);
    return Graph::from_edges(n1 + n2, edges);
}

}  // namespace opdyn
