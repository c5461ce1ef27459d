#include "submod/lovasz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "submod/prefix_oracle.hpp"

namespace submod {

ConsistentPermutation consistent_permutation(std::span<const double> x) {
    if (x.empty()) throw std::domain_error("empty vector");
    for (double v : x)
        if (!std::isfinite(v)) throw std::domain_error("non-finite coordinate");
    ConsistentPermutation p;
    p.order.resize(x.size());
    std::iota(p.order.begin(), p.order.end(), 0);
    std::sort(p.order.begin(), p.order.end(), [&](int a, int b) {
        return x[static_cast<size_t>(a)] > x[static_cast<size_t>(b)] ||
               (x[static_cast<size_t>(a)] == x[static_cast<size_t>(b)] && a < b);
    });
    p.inverse.resize(x.size());
    for (int r = 0; r < static_cast<int>(x.size()); ++r)
        p.inverse[static_cast<size_t>(p.order[static_cast<size_t>(r)])] = r;
    return p;
}

namespace {
void require_in_cube(std::span<const double> x) {
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("point outside [0,1]^n");
}
}  // namespace

double lovasz_value(std::span<const double> x, const SubmodularInstance& inst,
                    QueryLedger* ledger, Phase phase) {
    require_in_cube(x);
    auto p = consistent_permutation(x);
    PrefixOracle oracle(inst, p.order, ledger);
    double f = 0.0, prev = 0.0;
    for (int i = 1; i <= inst.n(); ++i) {
        double cur = oracle.query(i, phase);
        f += (cur - prev) * x[static_cast<size_t>(p.order[static_cast<size_t>(i) - 1])];
        prev = cur;
    }
    return f;
}

std::vector<double> lovasz_subgradient(std::span<const double> x, const SubmodularInstance& inst,
                                       QueryLedger* ledger, Phase phase) {
    require_in_cube(x);
    auto p = consistent_permutation(x);
    PrefixOracle oracle(inst, p.order, ledger);
    std::vector<double> g(x.size(), 0.0);
    double prev = 0.0;
    for (int i = 1; i <= inst.n(); ++i) {
        double cur = oracle.query(i, phase);
        g[static_cast<size_t>(p.order[static_cast<size_t>(i) - 1])] = cur - prev;
        prev = cur;
    }
    return g;
}

RoundedSet round_to_set(std::span<const double> x, const SubmodularInstance& inst,
                        QueryLedger* ledger, Phase phase) {
    require_in_cube(x);
    auto p = consistent_permutation(x);
    PrefixOracle oracle(inst, p.order, ledger);
    int best_i = 0;
    double best = 0.0;  // F(empty)
    for (int i = 1; i <= inst.n(); ++i) {
        double cur = oracle.query(i, phase);
        if (cur < best) {
            best = cur;
            best_i = i;
        }
    }
    RoundedSet r;
    r.value = best;
    r.set.assign(p.order.begin(), p.order.begin() + best_i);
    std::sort(r.set.begin(), r.set.end());
    return r;
}

BruteforceMin exact_min_bruteforce(const SubmodularInstance& inst) {
    const int n = inst.n();
    if (n > 20) throw std::length_error("brute force limited to n <= 20");
    SetEvaluator ev(inst);
    ev.clear();
    BruteforceMin out;
    out.mask = 0;
    out.value = ev.value();
    std::uint64_t prev = 0;
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
        std::uint64_t g = i ^ (i >> 1);
        double v = ev.toggle(static_cast<int>(std::countr_zero(g ^ prev)));
        prev = g;
        if (v < out.value || (v == out.value && g < out.mask)) {
            out.value = v;
            out.mask = g;
        }
    }
    for (int e = 0; e < n; ++e)
        if (out.mask & (std::uint64_t{1} << e)) out.set.push_back(e);
    return out;
}

}  // namespace submod
