#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "submod/instance.hpp"
#include "submod/ledger.hpp"
#include "submod/ordered_point.hpp"

namespace submod {

// The evaluation oracle of the cost model: query(i) returns F(P[i]) for the
// bound permutation P and charges one classical EO. P is either a live
// OrderedPoint (tracks the point as it moves) or a frozen permutation.
//
// value(i) returns the same number without charging; the quantum simulator
// peeks through it while its ledger charges follow the cost formulas instead.
class PrefixOracle {
public:
    PrefixOracle(const SubmodularInstance& inst, const OrderedPoint* point, QueryLedger* ledger);
    PrefixOracle(const SubmodularInstance& inst, std::vector<int> fixed_perm, QueryLedger* ledger);

    double query(int i, Phase phase = Phase::Other) {
        if (ledger_) ledger_->charge_classical(phase);
        return value(i);
    }

    double value(int i) {
        if (phi_) {
            if (i < 0 || i > inst_->n()) throw std::domain_error("prefix index out of range");
            return (phi_[i] - shift_) * scale_;
        }
        return value_generic(i);
    }

    int n() const { return inst_->n(); }
    const SubmodularInstance& instance() const { return *inst_; }
    QueryLedger* ledger() const { return ledger_; }

    int element_at_rank(int r) const;  // 1-based

private:
    void ensure_scan(int i);
    double value_generic(int i);

    const SubmodularInstance* inst_;
    const OrderedPoint* point_ = nullptr;
    std::vector<int> fixed_;
    QueryLedger* ledger_;
    const double* phi_ = nullptr;  // rank-only fast path
    double shift_ = 0.0, scale_ = 1.0;

    // Incremental scan state for instances without rank-only evaluation.
    SetEvaluator scan_;
    int cursor_ = 0;      // elements added so far
    int walk_next_ = -1;  // next element in rank order, -1 = needs reset
    std::uint64_t synced_version_ = ~std::uint64_t{0};
};

}  // namespace submod
