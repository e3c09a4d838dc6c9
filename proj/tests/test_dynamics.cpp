#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"

using namespace opdyn;

namespace {

CounterexampleParams pstar() {
    return CounterexampleParams{.mu = 0.4, .delta = 0.45, .eps1 = 0.089, .eps2 = 5e-4, .d = 0.004};
}

// line(13) assignments behind the fig1 preset, v1..v13 -> 0..12. The first
// cascades zeros down the whole right end; the second leaves two coin flips.
ExpertAssignment fig1_top() {
    return {{0, 1, 2, 3, 4, 5}, {6, 7}};
}
ExpertAssignment fig1_bottom() {
    return {{0, 1, 2, 3, 4, 5}, {6, 9}};
}

// Flagship regular graph, built once for the whole binary.
const Graph& flagship() {
    static const Graph g = generate_counterexample(pstar(), 20000, GraphMode::Regular, 1);
    return g;
}

ExpertAssignment flagship_blocks_io() {
    const auto& layout = *flagship().blocks();
    ExpertAssignment a;
    for (long long v = layout.begin(Block::I); v < layout.end(Block::I); ++v)
        a.e1.push_back(static_cast<int>(v));
    for (long long v = layout.begin(Block::O); v < layout.end(Block::O); ++v)
        a.e0.push_back(static_cast<int>(v));
    return a;
}

}  // namespace

TEST_CASE("delta on the line(13) scenario") {
    const auto g = generate_line(13);
    const auto a = fig1_top();
    CHECK(delta(g, a, 8) == -1);   // v9: one E0 neighbor, one unlabeled
    CHECK(delta(g, a, 9) == 0);
    CHECK_THROWS_AS(delta(g, a, 3), std::invalid_argument);  // expert
}

TEST_CASE("delta in a complete graph sees all experts") {
    const auto k8 = generate_er(8, 1.0, 0);
    const ExpertAssignment a{{0, 1, 2}, {3}};
    for (int v = 4; v < 8; ++v) CHECK(delta(k8, a, v) == 2);
}

TEST_CASE("non-iterative dissemination on the fig1 coin assignment") {
    const auto g = generate_line(13);
    const auto a = fig1_bottom();
    long long coins = 0;
    const auto labeling = disseminate_noniterative(g, a, 12345, &coins);
    CHECK(coins == 2);  // v12, v13
    CHECK(labeling.labels[7] == Label::Zero);
    CHECK(labeling.labels[8] == Label::Zero);
    CHECK(labeling.labels[10] == Label::Zero);
    CHECK(labeling.labels[6] == Label::Zero);   // expert keeps its label
    CHECK(labeling.labels[0] == Label::One);
    CHECK(labeling.unlabeled == 0);
    // deterministic part: ones = 6 experts, zeros = 2 experts + 3 converts
    CHECK(labeling.ones + labeling.zeros == 13);
    CHECK(labeling.zeros >= 5);
    CHECK(labeling.ones >= 6);
}

TEST_CASE("non-iterative with empty expert set coins every vertex") {
    const auto g = generate_line(5);
    long long coins = 0;
    const auto labeling = disseminate_noniterative(g, {}, 7, &coins);
    CHECK(coins == 5);
    CHECK(labeling.unlabeled == 0);
}

TEST_CASE("iterative dissemination on the fig1 cascade assignment runs 5 rounds") {
    const auto g = generate_line(13);
    const auto trace = disseminate_iterative(g, fig1_top(), 999);
    CHECK(trace.coins_used == 0);
    CHECK(trace.final.ones == 6);
    CHECK(trace.final.zeros == 7);
    REQUIRE(trace.rounds.size() == 5);
    // v9..v13 (8..12) get Zero one per round
    for (int r = 0; r < 5; ++r) {
        CHECK(trace.rounds[r].round == r + 1);
        CHECK(trace.rounds[r].ones_count == 0);
        CHECK(trace.rounds[r].zeros_count == 1);
        REQUIRE(trace.rounds[r].zeros.size() == 1);
        CHECK(trace.rounds[r].zeros[0] == 8 + r);
    }
    const auto outcome = majority_outcome(trace.final);
    CHECK(outcome.verdict == Verdict::ZeroMajority);
}

TEST_CASE("iterative dissemination on the flagship counterexample") {
    const auto& g = flagship();
    const auto& layout = *g.blocks();
    const auto a = flagship_blocks_io();

    const auto trace = disseminate_iterative(g, a, 5);
    CHECK(trace.coins_used == 0);
    REQUIRE(trace.rounds.size() == 2);
    CHECK(trace.rounds[0].ones_count == 2360);   // J
    CHECK(trace.rounds[0].zeros_count == 9560);  // P
    CHECK(trace.rounds[1].ones_count == 80);     // D through J
    CHECK(trace.rounds[1].zeros_count == 0);
    CHECK(trace.final.ones == 10040);
    CHECK(trace.final.zeros == 9960);
    CHECK(majority_outcome(trace.final).verdict == Verdict::OneMajority);

    // round-1 vertex sets are exactly the blocks
    for (int v : trace.rounds[0].ones) CHECK(layout.block_of(v) == Block::J);
    for (int v : trace.rounds[0].zeros) CHECK(layout.block_of(v) == Block::P);
    for (int v : trace.rounds[1].ones) CHECK(layout.block_of(v) == Block::D);
}

TEST_CASE("non-iterative dissemination on the flagship counterexample") {
    const auto& g = flagship();
    const auto& layout = *g.blocks();
    long long coins = 0;
    const auto labeling = disseminate_noniterative(g, flagship_blocks_io(), 8, &coins);
    CHECK(coins == 80);  // exactly the D block
    for (long long v = layout.begin(Block::J); v < layout.end(Block::J); ++v)
        CHECK(labeling.labels[v] == Label::One);
    for (long long v = layout.begin(Block::P); v < layout.end(Block::P); ++v)
        CHECK(labeling.labels[v] == Label::Zero);
    CHECK(labeling.unlabeled == 0);
    // ones = |I| + |J| + (coins that came up one)
    CHECK(labeling.ones >= 9960);
    CHECK(labeling.ones <= 10040);
}

TEST_CASE("random-mode flagship: mean delta over P concentrates at -3.8") {
    const auto g = generate_counterexample(pstar(), 20000, GraphMode::Random, 77);
    const auto& layout = *g.blocks();
    ExpertAssignment a;
    for (long long v = layout.begin(Block::I); v < layout.end(Block::I); ++v)
        a.e1.push_back(static_cast<int>(v));
    for (long long v = layout.begin(Block::O); v < layout.end(Block::O); ++v)
        a.e0.push_back(static_cast<int>(v));
    const auto deltas = delta_all(g, a);
    double sum = 0;
    for (long long v = layout.begin(Block::P); v < layout.end(Block::P); ++v)
        sum += static_cast<double>(deltas[v]);
    const double mean = sum / static_cast<double>(layout.size(Block::P));
    const auto q = pstar();
    const double sigma = std::sqrt(q.p_ip() * (1 - q.p_ip()) * 7600.0);
    const double tol = 4 * sigma / std::sqrt(9560.0);
    CHECK(std::fabs(mean - (-3.8)) <= tol);
}

TEST_CASE("stall rule: isolated vertex receives a coin") {
    const auto g = Graph::from_edges(2, {});
    const ExpertAssignment a{{0}, {}};
    const auto trace = disseminate_iterative(g, a, 3);
    CHECK(trace.coins_used == 1);
    CHECK(trace.final.unlabeled == 0);
    CHECK(trace.final.labels[0] == Label::One);
    REQUIRE(trace.rounds.size() == 1);
    CHECK(trace.rounds[0].ones_count + trace.rounds[0].zeros_count == 1);
}

TEST_CASE("trace invariants: disjoint rounds, monotone growth, expert immutability") {
    const auto g = generate_er(40, 0.15, 11);
    ExpertAssignment a;
    for (int v = 0; v < 8; ++v) a.e1.push_back(v);
    for (int v = 8; v < 12; ++v) a.e0.push_back(v);
    const auto trace = disseminate_iterative(g, a, 17);

    std::set<int> seen;
    for (const auto& r : trace.rounds) {
        CHECK(r.ones_count + r.zeros_count > 0);  // strictly grows each round
        for (int v : r.ones) CHECK(seen.insert(v).second);
        for (int v : r.zeros) CHECK(seen.insert(v).second);
    }
    for (int v : a.e1) {
        CHECK_FALSE(seen.count(v));
        CHECK(trace.final.labels[v] == Label::One);
    }
    for (int v : a.e0) CHECK(trace.final.labels[v] == Label::Zero);
    CHECK(trace.final.unlabeled == 0);
}

TEST_CASE("determinism: identical seeds give identical outcomes") {
    const auto g = generate_er(60, 0.1, 4);
    ExpertAssignment a;
    for (int v = 0; v < 10; ++v) a.e1.push_back(2 * v);
    for (int v = 0; v < 5; ++v) a.e0.push_back(2 * v + 1);

    const auto t1 = disseminate_iterative(g, a, 77);
    const auto t2 = disseminate_iterative(g, a, 77);
    CHECK(t1.final.labels == t2.final.labels);
    CHECK(t1.coins_used == t2.coins_used);

    const auto l1 = disseminate_noniterative(g, a, 77);
    const auto l2 = disseminate_noniterative(g, a, 77);
    CHECK(l1.labels == l2.labels);
}

TEST_CASE("equivalence: iterative equals non-iterative when round one decides everyone") {
    // K12: every non-expert is adjacent to all experts, so round 1 finishes.
    const auto k12 = generate_er(12, 1.0, 0);
    ExpertAssignment a{{0, 1, 2}, {3, 4}};
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
        const auto iter = disseminate_iterative(k12, a, seed);
        const auto non = disseminate_noniterative(k12, a, seed);
        CHECK(iter.final.labels == non.labels);
        CHECK(iter.rounds.size() == 1);
    }
    // star with expert center: leaves copy the center in round 1
    const auto star = generate_star(9);
    ExpertAssignment b{{0}, {1}};
    for (std::uint64_t seed : {5ULL, 6ULL}) {
        const auto iter = disseminate_iterative(star, b, seed);
        const auto non = disseminate_noniterative(star, b, seed);
        CHECK(iter.final.labels == non.labels);
    }
}

TEST_CASE("majority_outcome verdicts") {
    {
        std::vector<Label> l(13, Label::Zero);
        for (int v = 0; v < 7; ++v) l[v] = Label::One;
        const auto out = majority_outcome(Labeling::from_labels(l));
        CHECK(out.verdict == Verdict::OneMajority);
        CHECK(out.ones == 7);
        CHECK(out.zeros == 6);
    }
    {
        std::vector<Label> l(20000, Label::Zero);
        for (int v = 0; v < 10000; ++v) l[v] = Label::One;
        CHECK(majority_outcome(Labeling::from_labels(l)).verdict == Verdict::NoStrictMajority);
    }
    {
        std::vector<Label> l(20000, Label::Zero);
        for (int v = 0; v < 9999; ++v) l[v] = Label::One;
        CHECK(majority_outcome(Labeling::from_labels(l)).verdict == Verdict::ZeroMajority);
    }
    {
        std::vector<Label> l(3, Label::One);
        l[2] = Label::Unlabeled;
        CHECK_THROWS_AS(majority_outcome(Labeling::from_labels(l)), std::invalid_argument);
    }
}

TEST_CASE("expected_delta: bilinear form at the flagship assignment") {
    const auto q = pstar();
    BlockCounts counts{};
    counts.c1[static_cast<int>(Block::I)] = 7600;  // E1 = I
    counts.c0[static_cast<int>(Block::O)] = 400;   // E0 = O

    CHECK(expected_delta(Block::O, counts, q, 20000) == doctest::Approx(7200.0));
    CHECK(expected_delta(Block::J, counts, q, 20000) == doctest::Approx(676.4));
    CHECK(expected_delta(Block::P, counts, q, 20000) == doctest::Approx(-3.8));
    CHECK(expected_delta(Block::I, counts, q, 20000) == doctest::Approx(7200.0));
    CHECK_THROWS_AS(expected_delta(Block::D, counts, q, 20000), std::invalid_argument);
}

TEST_CASE("expected_delta for O depends only on the non-D totals") {
    const auto q = pstar();
    BlockCounts counts{};
    counts.c1[static_cast<int>(Block::I)] = 7000;
    counts.c1[static_cast<int>(Block::P)] = 560;
    counts.c1[static_cast<int>(Block::D)] = 40;  // excluded for O (w = 0 on D)
    counts.c0[static_cast<int>(Block::J)] = 360;
    counts.c0[static_cast<int>(Block::D)] = 40;
    // bilinear form: (7000 + 560) - 360 = 7200
    CHECK(expected_delta(Block::O, counts, q, 20000) == doctest::Approx(7200.0));
}

TEST_CASE("expected_delta rejects counts exceeding block sizes") {
    const auto q = pstar();
    BlockCounts counts{};
    counts.c1[static_cast<int>(Block::O)] = 401;  // |O| = 400 at n = 20000
    CHECK_THROWS_AS(expected_delta(Block::O, counts, q, 20000), std::invalid_argument);
}

TEST_CASE("delta against the regular counterexample matches the frozen values") {
    const auto& g = flagship();
    const auto& layout = *g.blocks();
    const auto a = flagship_blocks_io();
    // spot-check a few vertices of each block (the full scan is acceptance work)
    CHECK(delta(g, a, static_cast<int>(layout.begin(Block::J))) == 676);
    CHECK(delta(g, a, static_cast<int>(layout.end(Block::J) - 1)) == 676);
    CHECK(delta(g, a, static_cast<int>(layout.begin(Block::P))) == -4);
    CHECK(delta(g, a, static_cast<int>(layout.end(Block::P) - 1)) == -4);
    CHECK(delta(g, a, static_cast<int>(layout.begin(Block::D))) == 0);
}

TEST_CASE("BlockCounts::from_assignment tallies per block and label") {
    const auto g = generate_counterexample(pstar(), 2000, GraphMode::Regular, 0);
    const auto& layout = *g.blocks();
    ExpertAssignment a;
    a.e1 = {0, 1, static_cast<int>(layout.begin(Block::J))};
    a.e0 = {static_cast<int>(layout.begin(Block::P)), static_cast<int>(layout.begin(Block::D))};
    const auto c = BlockCounts::from_assignment(layout, a);
    CHECK(c.c1[static_cast<int>(Block::I)] == 2);
    CHECK(c.c1[static_cast<int>(Block::J)] == 1);
    CHECK(c.c0[static_cast<int>(Block::P)] == 1);
    CHECK(c.c0[static_cast<int>(Block::D)] == 1);
    CHECK(c.e1_total() == 3);
    CHECK(c.e0_total() == 2);
}

TEST_CASE("assignment validation rejects overlap and bad vertices") {
    const auto g = generate_line(5);
    CHECK_THROWS_AS(delta(g, ExpertAssignment{{0, 1}, {1}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(delta(g, ExpertAssignment{{0, 7}, {}}, 2), std::invalid_argument);
}

TEST_CASE("trace text export lists vertices on small graphs, counts above 1e4") {
    const auto g = generate_line(13);
    const auto trace = disseminate_iterative(g, fig1_top(), 1);
    std::ostringstream os;
    write_trace(os, trace);
    CHECK(os.str() ==
          "round 1: ones 0, zeros 1 | one: zero: 8\n"
          "round 2: ones 0, zeros 1 | one: zero: 9\n"
          "round 3: ones 0, zeros 1 | one: zero: 10\n"
          "round 4: ones 0, zeros 1 | one: zero: 11\n"
          "round 5: ones 0, zeros 1 | one: zero: 12\n"
          "final: ones 6, zeros 7, coins 0\n");

    const auto big = disseminate_iterative(flagship(), flagship_blocks_io(), 2);
    std::ostringstream big_os;
    write_trace(big_os, big);
    CHECK(big_os.str() ==
          "round 1: ones 2360, zeros 9560\n"
          "round 2: ones 80, zeros 0\n"
          "final: ones 10040, zeros 9960, coins 0\n");
}
