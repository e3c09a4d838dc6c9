#pragma once

#include <cstdint>
#include <vector>

#include "opdyn/common.hpp"

namespace opdyn {

// 2*exp(-min{dev^2, dev} * n*p / 4), the two-sided multiplicative bound.
double chernoff_bound(long long n, double p, double dev);

// Exact binomial mass and tails, accumulated in long double via lgammal.
double binomial_pmf(long long n, double p, long long k);
double binomial_tail_geq(long long n, double p, long long k);  // P(X >= k)
double binomial_tail_leq(long long n, double p, long long k);  // P(X <= k)
double binomial_two_sided_dev(long long n, double p, double dev);  // P(|X-np| > dev*np)

struct AuditSetRecord {
    long long set_size = 0;
    long long exception_count = 0;  // |X_S|, recomputed from the graph
};

struct AuditReport {
    long long n = 0;
    double p = 0, eps = 0;
    double bound = 0;  // 4*eps^-3*(ln(1/eps) + 2), exact
    std::vector<AuditSetRecord> sets;
    long long violations = 0;  // sets with |X_S| > bound
    bool all_within() const { return violations == 0; }
    long long max_exception_count() const;
};

// Samples one G(n,p) and num_sets uniform sets with |S| >= eps*n; for each set
// the full exception set X_S = {v not in S : ||N(v) ∩ S| - p|S|| > eps*p|S|}
// is computed exactly. Requires p >= eps (the bound's hypothesis).
AuditReport edge_distribution_audit(int n, double p, double eps, int num_sets, std::uint64_t seed);

struct EmpiricalCheck {
    double frequency = 0;  // empirical P(|X - np| > dev*np)
    double bound = 0;      // chernoff_bound(n, p, dev)
    double slack = 0;      // 4*sqrt(bound/trials)
    long long trials = 0;
    bool pass = false;     // frequency <= bound + slack
};

EmpiricalCheck chernoff_empirical_check(long long n, double p, double dev, long long trials,
                                        std::uint64_t seed);

}  // namespace opdyn
