#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/common.hpp"

namespace opdyn {

enum class Block : std::uint8_t { I = 0, J = 1, O = 2, P = 3, D = 4 };
inline constexpr int kNumBlocks = 5;

inline char block_letter(Block b) { return "IJOPD"[static_cast<int>(b)]; }

enum class GraphMode { Explicit, Random, Regular };

inline std::string graph_mode_name(GraphMode m) {
    switch (m) {
        case GraphMode::Explicit: return "explicit";
        case GraphMode::Random: return "random";
        case GraphMode::Regular: return "regular";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Counterexample parameters and block sizes
// ---------------------------------------------------------------------------

struct CounterexampleParams {
    double mu = 0;
    double delta = 0;
    double eps1 = 0;
    double eps2 = 0;
    double d = 0;

    // p_IJ = p_JP = (1/2-delta)/(1/2+delta) + eps1, p_IP = same base - eps2.
    double base_ratio() const { return (0.5 - delta) / (0.5 + delta); }
    double p_ij() const { return base_ratio() + eps1; }
    double p_jp() const { return p_ij(); }
    double p_ip() const { return base_ratio() - eps2; }
};

struct ParamViolation {
    std::string name;  // the inequality, e.g. "d < eps1*delta*mu/4"
    double lhs = 0;
    double rhs = 0;
};

struct ParamReport {
    std::vector<ParamViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Strict-inequality check of every constraint the construction relies on.
// Boundary equality (relative 1e-12) is reported as a violation.
ParamReport validate_params(const CounterexampleParams& params);

struct BlockSizes {
    long long size_i = 0, size_j = 0, size_o = 0, size_p = 0, size_d = 0;
    long long total() const { return size_i + size_j + size_o + size_p + size_d; }
    long long size(Block b) const {
        switch (b) {
            case Block::I: return size_i;
            case Block::J: return size_j;
            case Block::O: return size_o;
            case Block::P: return size_p;
            case Block::D: return size_d;
        }
        return 0;
    }
};

// size_I = round(mu(1/2+delta)n), size_O = round(mu n) - size_I (remainder rule
// keeps size_I + size_O = round(mu n) exactly), size_D = round(dn) bumped +1
// when n - size_D is odd; J and P fill the two halves.
// Throws infeasible_error for n == 0, any negative size, or size_D > size_J.
BlockSizes resolve_sizes(const CounterexampleParams& params, long long n);

// Vertex layout: I, J, O, P, D occupy consecutive index ranges in this order.
struct BlockLayout {
    BlockSizes sizes;
    long long offset[kNumBlocks + 1] = {0, 0, 0, 0, 0, 0};

    explicit BlockLayout(const BlockSizes& s) : sizes(s) {
        offset[0] = 0;
        offset[1] = s.size_i;
        offset[2] = offset[1] + s.size_j;
        offset[3] = offset[2] + s.size_o;
        offset[4] = offset[3] + s.size_p;
        offset[5] = offset[4] + s.size_d;
    }

    long long n() const { return offset[5]; }
    Block block_of(long long v) const {
        for (int b = 0; b < kNumBlocks; ++b)
            if (v < offset[b + 1]) return static_cast<Block>(b);
        throw std::out_of_range("block_of: vertex out of range");
    }
    long long begin(Block b) const { return offset[static_cast<int>(b)]; }
    long long end(Block b) const { return offset[static_cast<int>(b) + 1]; }
    long long size(Block b) const { return end(b) - begin(b); }
};

// Implicit adjacency between blocks: I,J,O,P are cliques, O is joined to every
// block except D, D has no implicit edges. Self-pairs report the clique rule.
bool implicit_blocks_adjacent(Block x, Block y);

// ---------------------------------------------------------------------------
// Graph: implicit block structure + explicit CSR adjacency for everything the
// block kinds do not imply (random/regular bipartite edges, D-attachments, and
// all edges of non-block graphs).
// ---------------------------------------------------------------------------

class Graph {
public:
    Graph() = default;

    int n() const { return n_; }
    GraphMode mode() const { return mode_; }
    const std::optional<BlockLayout>& blocks() const { return blocks_; }

    std::span<const int> explicit_neighbors(int v) const {
        return {adj_.data() + row_[v], adj_.data() + row_[v + 1]};
    }
    long long explicit_edge_count() const { return static_cast<long long>(adj_.size()) / 2; }

    bool adjacent(int u, int v) const;
    long long degree(int v) const;          // implicit + explicit
    std::vector<int> neighbors(int v) const;  // sorted, implicit + explicit
    long long edge_count() const;           // total including implicit

    // Builders. Edges must be given once per unordered pair, no self-loops.
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                            GraphMode mode = GraphMode::Explicit);
    static Graph with_blocks(const BlockLayout& layout,
                             const std::vector<std::pair<int, int>>& cross_edges,
                             GraphMode mode);

private:
    void build_csr(const std::vector<std::pair<int, int>>& edges);

    int n_ = 0;
    GraphMode mode_ = GraphMode::Explicit;
    std::optional<BlockLayout> blocks_;
    std::vector<long long> row_;  // size n+1
    std::vector<int> adj_;        // rows sorted ascending
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// The five-block counterexample graph. Random mode: each cross-block pair is an
// independent Bernoulli bipartite graph. Regular mode: derandomized wraparound
// intervals, one side per pair holds arcs of exact length round(p*|B|); the
// side is chosen to minimize the amplified rounding error on the other side.
Graph generate_counterexample(const CounterexampleParams& params, long long n,
                              GraphMode mode, std::uint64_t seed);

Graph generate_er(int n, double p, std::uint64_t seed);
Graph generate_line(int n);
Graph generate_star(int leaves);
// Stub-matching with collision retries and full restarts when stuck.
Graph generate_random_regular(int n, int deg, std::uint64_t seed);
Graph disjoint_union(const Graph& g1, const Graph& g2);

// Regular-mode internals, exposed for tests and the counterexample builder.
namespace regular_detail {
// True if side X should hold the exact arcs for pair (X,Y) with probability p.
bool x_is_arc_side(long long sz_x, long long sz_y, double p);
// Arc of A-vertex i into B's position space: [start, start+len) mod sz_b.
struct Arc {
    long long start = 0;
    long long len = 0;
};
Arc arc_of(long long i, long long sz_a, long long sz_b, double p);
}  // namespace regular_detail

}  // namespace opdyn
