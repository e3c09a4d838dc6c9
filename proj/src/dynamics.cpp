#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <stdexcept>
#include <string>

namespace opdyn {

Labeling Labeling::from_labels(std::vector<Label> l) {
    Labeling out;
    out.labels = std::move(l);
    for (Label x : out.labels) {
        if (x == Label::One) ++out.ones;
        else if (x == Label::Zero) ++out.zeros;
        else ++out.unlabeled;
    }
    return out;
}

void ExpertAssignment::validate(int n) const {
    std::vector<std::uint8_t> seen(n, 0);
    for (int v : e1) {
        if (v < 0 || v >= n) throw std::invalid_argument("assignment: vertex out of range");
        if (seen[v]++) throw std::invalid_argument("assignment: duplicate vertex in E1");
    }
    for (int v : e0) {
        if (v < 0 || v >= n) throw std::invalid_argument("assignment: vertex out of range");
        if (seen[v]++) throw std::invalid_argument("assignment: E0 overlaps E1 or repeats");
    }
}

namespace {

struct SignContext {
    std::vector<std::int8_t> sign;      // +1 for E1, -1 for E0
    long long blk1[kNumBlocks] = {0, 0, 0, 0, 0};
    long long blk0[kNumBlocks] = {0, 0, 0, 0, 0};

    SignContext(const Graph& g, const ExpertAssignment& a) : sign(g.n(), 0) {
        a.validate(g.n());
        const auto& blocks = g.blocks();
        for (int v : a.e1) {
            sign[v] = 1;
            if (blocks) ++blk1[static_cast<int>(blocks->block_of(v))];
        }
        for (int v : a.e0) {
            sign[v] = -1;
            if (blocks) ++blk0[static_cast<int>(blocks->block_of(v))];
        }
    }

    // Implicit part of Delta for a vertex in block b (v itself is no expert,
    // so clique self-exclusion never matters here).
    long long implicit_delta(Block b) const {
        long long d = 0;
        for (int x = 0; x < kNumBlocks; ++x)
            if (implicit_blocks_adjacent(b, static_cast<Block>(x))) d += blk1[x] - blk0[x];
        return d;
    }
};

long long delta_of(const Graph& g, const SignContext& ctx, int v) {
    long long d = 0;
    if (g.blocks()) d = ctx.implicit_delta(g.blocks()->block_of(v));
    for (int u : g.explicit_neighbors(v)) d += ctx.sign[u];
    return d;
}

}  // namespace

long long delta(const Graph& g, const ExpertAssignment& a, int v) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("delta: vertex out of range");
    SignContext ctx(g, a);
    if (ctx.sign[v] != 0) throw std::invalid_argument("delta: vertex " + std::to_string(v) + " is an expert");
    return delta_of(g, ctx, v);
}

std::vector<long long> delta_all(const Graph& g, const ExpertAssignment& a) {
    SignContext ctx(g, a);
    std::vector<long long> out(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
        if (ctx.sign[v] == 0) out[v] = delta_of(g, ctx, v);
    return out;
}

Labeling disseminate_noniterative(const Graph& g, const ExpertAssignment& a,
                                  std::uint64_t tie_seed, long long* coins_used) {
    SignContext ctx(g, a);
    Rng rng(tie_seed);
    long long coins = 0;
    std::vector<Label> labels(g.n(), Label::Unlabeled);
    for (int v : a.e1) labels[v] = Label::One;
    for (int v : a.e0) labels[v] = Label::Zero;
    for (int v = 0; v < g.n(); ++v) {
        if (ctx.sign[v] != 0) continue;
        const long long d = delta_of(g, ctx, v);
        if (d > 0) labels[v] = Label::One;
        else if (d < 0) labels[v] = Label::Zero;
        else {
            ++coins;
            labels[v] = rng.coin() ? Label::One : Label::Zero;
        }
    }
    if (coins_used) *coins_used = coins;
    return Labeling::from_labels(std::move(labels));
}

Trace disseminate_iterative(const Graph& g, const ExpertAssignment& a, std::uint64_t tie_seed,
                            bool record_vertices) {
    const int n = g.n();
    a.validate(n);
    Rng rng(tie_seed);
    Trace trace;

    std::vector<Label> labels(n, Label::Unlabeled);
    for (int v : a.e1) labels[v] = Label::One;
    for (int v : a.e0) labels[v] = Label::Zero;

    // Labeled-neighbor counters over explicit edges; block tallies cover the
    // implicit edges. Both reflect the state at the start of the round.
    std::vector<int> cnt1(n, 0), cnt0(n, 0);
    long long tally1[kNumBlocks] = {0, 0, 0, 0, 0};
    long long tally0[kNumBlocks] = {0, 0, 0, 0, 0};
    const auto& blocks = g.blocks();

    auto commit = [&](const std::vector<int>& vs) {
        for (int u : vs) {
            const bool one = labels[u] == Label::One;
            if (blocks) {
                const int b = static_cast<int>(blocks->block_of(u));
                (one ? tally1[b] : tally0[b]) += 1;
            }
            auto* cnt = one ? cnt1.data() : cnt0.data();
            for (int w : g.explicit_neighbors(u)) ++cnt[w];
        }
    };

    std::vector<int> initial;
    initial.reserve(a.e1.size() + a.e0.size());
    initial.insert(initial.end(), a.e1.begin(), a.e1.end());
    initial.insert(initial.end(), a.e0.begin(), a.e0.end());

    std::vector<int> unlabeled;
    unlabeled.reserve(n);
    for (int v = 0; v < n; ++v)
        if (labels[v] == Label::Unlabeled) unlabeled.push_back(v);

    if (!unlabeled.empty()) commit(initial);

    int round = 0;
    while (!unlabeled.empty()) {
        ++round;
        long long imp1[kNumBlocks] = {0, 0, 0, 0, 0};
        long long imp0[kNumBlocks] = {0, 0, 0, 0, 0};
        if (blocks) {
            for (int b = 0; b < kNumBlocks; ++b)
                for (int x = 0; x < kNumBlocks; ++x)
                    if (implicit_blocks_adjacent(static_cast<Block>(b), static_cast<Block>(x))) {
                        imp1[b] += tally1[x];
                        imp0[b] += tally0[x];
                    }
        }

        RoundRecord rec;
        rec.round = round;
        std::vector<int> newly, survivors;
        for (int v : unlabeled) {
            long long one_side = cnt1[v], zero_side = cnt0[v];
            if (blocks) {
                const int b = static_cast<int>(blocks->block_of(v));
                one_side += imp1[b];
                zero_side += imp0[b];
            }
            Label lab = Label::Unlabeled;
            if (one_side > zero_side) lab = Label::One;
            else if (one_side < zero_side) lab = Label::Zero;
            else if (one_side > 0) {
                ++trace.coins_used;
                lab = rng.coin() ? Label::One : Label::Zero;
            }
            if (lab == Label::Unlabeled) {
                survivors.push_back(v);
            } else {
                labels[v] = lab;
                newly.push_back(v);
                if (lab == Label::One) {
                    ++rec.ones_count;
                    if (record_vertices) rec.ones.push_back(v);
                } else {
                    ++rec.zeros_count;
                    if (record_vertices) rec.zeros.push_back(v);
                }
            }
        }

        if (newly.empty()) {
            // Stall: survivors have no labeled neighbors at all; mirror the
            // non-iterative coin fallback and finish.
            for (int v : survivors) {
                ++trace.coins_used;
                const Label lab = rng.coin() ? Label::One : Label::Zero;
                labels[v] = lab;
                if (lab == Label::One) {
                    ++rec.ones_count;
                    if (record_vertices) rec.ones.push_back(v);
                } else {
                    ++rec.zeros_count;
                    if (record_vertices) rec.zeros.push_back(v);
                }
            }
            trace.rounds.push_back(std::move(rec));
            break;
        }

        trace.rounds.push_back(std::move(rec));
        unlabeled = std::move(survivors);
        if (!unlabeled.empty()) commit(newly);
    }

    trace.final = Labeling::from_labels(std::move(labels));
    assert(trace.final.unlabeled == 0);
    return trace;
}

Outcome majority_outcome(const Labeling& l) {
    if (l.unlabeled != 0)
        throw std::invalid_argument("majority_outcome: labeling has unlabeled vertices");
    const long long n = l.n();
    Outcome out{Verdict::NoStrictMajority, l.ones, l.zeros};
    if (2 * l.ones > n) out.verdict = Verdict::OneMajority;
    else if (2 * l.zeros > n) out.verdict = Verdict::ZeroMajority;
    return out;
}

void write_trace(std::ostream& os, const Trace& t) {
    const bool suppress = t.final.n() > 10000;
    for (const auto& r : t.rounds) {
        os << "round " << r.round << ": ones " << r.ones_count << ", zeros " << r.zeros_count;
        if (!suppress && (!r.ones.empty() || !r.zeros.empty())) {
            os << " | one:";
            for (int v : r.ones) os << ' ' << v;
            os << " zero:";
            for (int v : r.zeros) os << ' ' << v;
        }
        os << '\n';
    }
    os << "final: ones " << t.final.ones << ", zeros " << t.final.zeros << ", coins "
       << t.coins_used << '\n';
}

BlockCounts BlockCounts::from_assignment(const BlockLayout& layout, const ExpertAssignment& a) {
    BlockCounts c;
    for (int v : a.e1) ++c.c1[static_cast<int>(layout.block_of(v))];
    for (int v : a.e0) ++c.c0[static_cast<int>(layout.block_of(v))];
    return c;
}

long long BlockCounts::e1_total() const {
    long long s = 0;
    for (long long x : c1) s += x;
    return s;
}
long long BlockCounts::e0_total() const {
    long long s = 0;
    for (long long x : c0) s += x;
    return s;
}

double expected_delta(Block block, const BlockCounts& counts, const CounterexampleParams& params,
                      long long n) {
    if (block == Block::D)
        throw std::invalid_argument("expected_delta: block D is not covered by the formulas");
    const BlockSizes sizes = resolve_sizes(params, n);
    for (int b = 0; b < kNumBlocks; ++b) {
        if (counts.c1[b] + counts.c0[b] > sizes.size(static_cast<Block>(b)))
            throw std::invalid_argument("expected_delta: counts exceed block size");
    }

    auto weight = [&](Block row, Block col) -> double {
        if (col == Block::D) return 0.0;  // degree-1 attachments, excluded
        if (implicit_blocks_adjacent(row, col)) return 1.0;
        const bool ij = (row == Block::I && col == Block::J) || (row == Block::J && col == Block::I);
        const bool jp = (row == Block::J && col == Block::P) || (row == Block::P && col == Block::J);
        const bool ip = (row == Block::I && col == Block::P) || (row == Block::P && col == Block::I);
        if (ij) return params.p_ij();
        if (jp) return params.p_jp();
        if (ip) return params.p_ip();
        return 0.0;
    };

    double sum = 0;
    for (int b = 0; b < kNumBlocks; ++b)
        sum += weight(block, static_cast<Block>(b)) *
               static_cast<double>(counts.c1[b] - counts.c0[b]);
    return sum;
}

}  // namespace opdyn
