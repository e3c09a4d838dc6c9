#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "opdyn/graph.hpp"

namespace opdyn {

enum class Label : std::uint8_t { Unlabeled = 0, One = 1, Zero = 2 };

struct Labeling {
    std::vector<Label> labels;
    long long ones = 0, zeros = 0, unlabeled = 0;

    static Labeling from_labels(std::vector<Label> l);
    int n() const { return static_cast<int>(labels.size()); }
};

struct ExpertAssignment {
    std::vector<int> e1;  // truth
    std::vector<int> e0;  // falsehood
    // Throws std::invalid_argument on overlap or out-of-range vertices.
    void validate(int n) const;
};

struct RoundRecord {
    int round = 0;  // 1-based dissemination round
    long long ones_count = 0, zeros_count = 0;
    std::vector<int> ones, zeros;  // empty when vertex recording is off
};

struct Trace {
    std::vector<RoundRecord> rounds;
    long long coins_used = 0;
    Labeling final;
};

enum class Verdict { OneMajority, ZeroMajority, NoStrictMajority };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::OneMajority: return "one_majority";
        case Verdict::ZeroMajority: return "zero_majority";
        case Verdict::NoStrictMajority: return "no_strict_majority";
    }
    return "?";
}

struct Outcome {
    Verdict verdict;
    long long ones = 0, zeros = 0;
};

// Delta(v) = |N(v) ∩ E1| - |N(v) ∩ E0|, via block arithmetic plus explicit
// lists. Throws std::invalid_argument if v is an expert.
long long delta(const Graph& g, const ExpertAssignment& a, int v);

// Delta for every vertex in one pass; entries at expert positions are 0 and
// carry no meaning.
std::vector<long long> delta_all(const Graph& g, const ExpertAssignment& a);

// One round against the experts; Delta = 0 (including no expert neighbors)
// falls back to an independent fair coin. Coins are consumed in ascending
// vertex order from the tie_seed stream.
Labeling disseminate_noniterative(const Graph& g, const ExpertAssignment& a,
                                  std::uint64_t tie_seed, long long* coins_used = nullptr);

// Synchronous rounds against all currently labeled vertices; labels are final.
// Ties between labeled neighbor counts (a == b > 0) flip a coin; vertices with
// no labeled neighbor wait. If a round labels nobody, every remaining vertex
// gets an independent coin (stall rule) and the process ends.
Trace disseminate_iterative(const Graph& g, const ExpertAssignment& a, std::uint64_t tie_seed,
                            bool record_vertices = true);

// Throws std::invalid_argument if any vertex is unlabeled.
Outcome majority_outcome(const Labeling& l);

// One line per round with the newly labeled vertices; above 10^4 vertices the
// listings are suppressed and only counts appear.
void write_trace(std::ostream& os, const Trace& t);

// Per-block expert counts, the proof's bookkeeping quantities.
struct BlockCounts {
    long long c1[kNumBlocks] = {0, 0, 0, 0, 0};  // |block ∩ E1|, indexed by Block
    long long c0[kNumBlocks] = {0, 0, 0, 0, 0};

    static BlockCounts from_assignment(const BlockLayout& layout, const ExpertAssignment& a);
    long long e1_total() const;
    long long e0_total() const;
};

// The bilinear form sum_B w(block,B) * (c1[B] - c0[B]) with w = 1 on implicit
// connections, p_XY on random pairs and 0 on D (documented additive error at
// most 1 from D's degree-1 attachments). Throws for block D.
double expected_delta(Block block, const BlockCounts& counts, const CounterexampleParams& params,
                      long long n);

}  // namespace opdyn
