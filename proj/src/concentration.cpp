#include "opdyn/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opdyn/graph.hpp"

namespace opdyn {

double chernoff_bound(long long n, double p, double dev) {
    if (dev <= 0) throw std::invalid_argument("chernoff_bound: dev must be > 0");
    const long double mean = static_cast<long double>(n) * p;
    const long double expo = std::min<long double>(static_cast<long double>(dev) * dev, dev) * mean / 4.0L;
    return static_cast<double>(2.0L * expl(-expo));
}

namespace {

long double log_pmf(long long n, double p, long long k) {
    // k log p and (n-k) log(1-p) with the 0*log(0) = 0 convention.
    long double lp = lgammal(static_cast<long double>(n) + 1) -
                     lgammal(static_cast<long double>(k) + 1) -
                     lgammal(static_cast<long double>(n - k) + 1);
    if (k > 0) lp += static_cast<long double>(k) * logl(static_cast<long double>(p));
    if (n - k > 0) lp += static_cast<long double>(n - k) * log1pl(-static_cast<long double>(p));
    return lp;
}

}  // namespace

double binomial_pmf(long long n, double p, long long k) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1) return k == n ? 1.0 : 0.0;
    return static_cast<double>(expl(log_pmf(n, p, k)));
}

double binomial_tail_geq(long long n, double p, long long k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0) return 0.0;
    if (p >= 1) return 1.0;
    long double acc = 0;
    for (long long j = n; j >= k; --j) acc += expl(log_pmf(n, p, j));
    return static_cast<double>(std::min<long double>(acc, 1.0L));
}

double binomial_tail_leq(long long n, double p, long long k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    if (p <= 0) return 1.0;
    if (p >= 1) return 0.0;
    long double acc = 0;
    for (long long j = 0; j <= k; ++j) acc += expl(log_pmf(n, p, j));
    return static_cast<double>(std::min<long double>(acc, 1.0L));
}

// Strict "diff > radius" with a guard so that boundary points (|j - np|
// exactly delta*np up to floating-point noise) stay excluded.
static bool strictly_exceeds(long double diff, long double radius) {
    return diff > radius && diff - radius > 1e-9L * (1 + radius);
}

double binomial_two_sided_dev(long long n, double p, double dev) {
    const long double mean = static_cast<long double>(n) * p;
    const long double radius = static_cast<long double>(dev) * mean;
    long double acc = 0;
    for (long long j = 0; j <= n; ++j) {
        const long double diff = fabsl(static_cast<long double>(j) - mean);
        if (strictly_exceeds(diff, radius)) acc += expl(log_pmf(n, p, j));
    }
    return static_cast<double>(std::min<long double>(acc, 1.0L));
}

long long AuditReport::max_exception_count() const {
    long long m = 0;
    for (const auto& r : sets) m = std::max(m, r.exception_count);
    return m;
}

AuditReport edge_distribution_audit(int n, double p, double eps, int num_sets, std::uint64_t seed) {
    if (!(eps > 0)) throw std::invalid_argument("edge_distribution_audit: eps must be > 0");
    if (p < eps)
        throw std::invalid_argument("edge_distribution_audit: hypothesis p >= eps violated (p = " +
                                    std::to_string(p) + ", eps = " + std::to_string(eps) + ")");
    AuditReport rep;
    rep.n = n;
    rep.p = p;
    rep.eps = eps;
    rep.bound = 4.0 * std::pow(eps, -3.0) * (std::log(1.0 / eps) + 2.0);

    // One shared G(n,p); sets are drawn from an independent stream.
    const Graph g = generate_er(n, p, splitmix64(seed ^ 0x6772617068ULL));
    Rng rng(splitmix64(seed ^ 0x73657473ULL));

    const long long min_size = static_cast<long long>(std::ceil(eps * n));
    if (min_size > n) throw std::invalid_argument("edge_distribution_audit: eps*n exceeds n");
    std::vector<std::uint8_t> in_set(n, 0);
    for (int s = 0; s < num_sets; ++s) {
        const long long size = min_size + static_cast<long long>(rng.index(n - min_size + 1));
        const auto members = rng.sample(n, static_cast<int>(size));
        std::fill(in_set.begin(), in_set.end(), 0);
        for (int v : members) in_set[v] = 1;

        const long double threshold = static_cast<long double>(eps) * p * static_cast<long double>(size);
        const long double expected = static_cast<long double>(p) * static_cast<long double>(size);
        long long exceptions = 0;
        for (int v = 0; v < n; ++v) {
            if (in_set[v]) continue;
            long long hits = 0;
            for (int u : g.explicit_neighbors(v)) hits += in_set[u];
            if (strictly_exceeds(fabsl(static_cast<long double>(hits) - expected), threshold))
                ++exceptions;
        }
        rep.sets.push_back({size, exceptions});
        if (static_cast<double>(exceptions) > rep.bound) ++rep.violations;
    }
    return rep;
}

EmpiricalCheck chernoff_empirical_check(long long n, double p, double dev, long long trials,
                                        std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("chernoff_empirical_check: trials must be >= 1");
    Rng rng(seed);
    const long double mean = static_cast<long double>(n) * p;
    const long double radius = static_cast<long double>(dev) * mean;
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) {
        long long x = 0;
        for (long long i = 0; i < n; ++i) x += rng.bernoulli(p) ? 1 : 0;
        if (strictly_exceeds(fabsl(static_cast<long double>(x) - mean), radius)) ++hits;
    }
    EmpiricalCheck c;
    c.trials = trials;
    c.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    c.bound = chernoff_bound(n, p, dev);
    c.slack = 4.0 * std::sqrt(c.bound / static_cast<double>(trials));
    c.pass = c.frequency <= c.bound + c.slack;
    return c;
}

}  // namespace opdyn
