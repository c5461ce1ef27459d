#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "submod/instance.hpp"
#include "submod/ledger.hpp"

namespace submod {

// Descending-value order with ties broken by ascending index.
struct ConsistentPermutation {
    std::vector<int> order;    // P, 0-based elements
    std::vector<int> inverse;  // inverse[order[r]] = r
};

ConsistentPermutation consistent_permutation(std::span<const double> x);

// f(x) = sum_i (F(P[i]) - F(P[i-1])) x_{P_i}; issues exactly n prefix queries.
double lovasz_value(std::span<const double> x, const SubmodularInstance& inst,
                    QueryLedger* ledger = nullptr, Phase phase = Phase::Other);

// The Lovasz subgradient g(x)_{P_i} = F(P[i]) - F(P[i-1]), dense; n queries.
std::vector<double> lovasz_subgradient(std::span<const double> x, const SubmodularInstance& inst,
                                       QueryLedger* ledger = nullptr, Phase phase = Phase::Other);

struct RoundedSet {
    std::vector<int> set;
    double value = 0.0;
};

// Best prefix of the consistent permutation, the empty set included; ties go
// to the smallest prefix. The returned value is <= f(x).
RoundedSet round_to_set(std::span<const double> x, const SubmodularInstance& inst,
                        QueryLedger* ledger = nullptr, Phase phase = Phase::Rounding);

struct BruteforceMin {
    std::uint64_t mask = 0;
    std::vector<int> set;
    double value = 0.0;
};

// Global minimum over all 2^n subsets, n <= 20; ties break toward the
// smallest bitmask.
BruteforceMin exact_min_bruteforce(const SubmodularInstance& inst);

}  // namespace submod
