#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace submod {

// Accounting phases. Charges always land in the currently named phase so the
// per-phase breakdown sums to the totals by construction.
enum class Phase : int {
    Other = 0,
    GSample,
    GDSamplePlus,
    GDSampleMinus,
    Rounding,
    SampleDemo,
    Validate,
    kCount
};

const char* phase_name(Phase p);

// Counts evaluation-oracle work for one run. classical_eo counts actual
// oracle reads; quantum_eo accumulates the cost-model charges of the
// simulated quantum primitives.
class QueryLedger {
public:
    void charge_classical(Phase p, std::uint64_t units = 1) {
        auto& e = phases_[static_cast<int>(p)];
        e.classical += units;
        classical_ += units;
    }

    void charge_quantum(Phase p, std::uint64_t units) {
        auto& e = phases_[static_cast<int>(p)];
        e.quantum += units;
        quantum_ += units;
    }

    std::uint64_t classical_eo() const { return classical_; }
    std::uint64_t quantum_eo() const { return quantum_; }

    std::uint64_t classical_eo(Phase p) const { return phases_[static_cast<int>(p)].classical; }
    std::uint64_t quantum_eo(Phase p) const { return phases_[static_cast<int>(p)].quantum; }

    // JSON object {classical_eo, quantum_eo, phases:{...}} with stable key order.
    std::string to_json() const;

private:
    struct Entry {
        std::uint64_t classical = 0;
        std::uint64_t quantum = 0;
    };
    std::array<Entry, static_cast<int>(Phase::kCount)> phases_{};
    std::uint64_t classical_ = 0;
    std::uint64_t quantum_ = 0;
};

}  // namespace submod
