#include "submod/prefix_oracle.hpp"

#include <stdexcept>

namespace submod {

PrefixOracle::PrefixOracle(const SubmodularInstance& inst, const OrderedPoint* point,
                           QueryLedger* ledger)
    : inst_(&inst), point_(point), ledger_(ledger),
      phi_(inst.phi_raw()), shift_(inst.normalization_shift()), scale_(inst.normalization_scale()),
      scan_(inst) {
    if (point && point->n() != inst.n()) throw std::invalid_argument("point/instance size mismatch");
}

PrefixOracle::PrefixOracle(const SubmodularInstance& inst, std::vector<int> fixed_perm,
                           QueryLedger* ledger)
    : inst_(&inst), fixed_(std::move(fixed_perm)), ledger_(ledger),
      phi_(inst.phi_raw()), shift_(inst.normalization_shift()), scale_(inst.normalization_scale()),
      scan_(inst) {
    if (static_cast<int>(fixed_.size()) != inst.n())
        throw std::invalid_argument("permutation/instance size mismatch");
}

int PrefixOracle::element_at_rank(int r) const {
    if (point_) return point_->select(r);
    return fixed_[static_cast<size_t>(r) - 1];
}

double PrefixOracle::value_generic(int i) {
    if (i < 0 || i > inst_->n()) throw std::domain_error("prefix index out of range");
    if (i == 0) return 0.0;
    ensure_scan(i);
    return scan_.value();
}

void PrefixOracle::ensure_scan(int i) {
    std::uint64_t ver = point_ ? point_->version() : 0;
    if (ver != synced_version_ || i < cursor_) {
        scan_.clear();
        cursor_ = 0;
        walk_next_ = point_ ? point_->first() : (fixed_.empty() ? -1 : fixed_[0]);
        synced_version_ = ver;
    }
    while (cursor_ < i) {
        scan_.add(walk_next_);
        ++cursor_;
        walk_next_ = point_ ? point_->next(walk_next_)
                            : (cursor_ < static_cast<int>(fixed_.size()) ? fixed_[static_cast<size_t>(cursor_)] : -1);
    }
}

}  // namespace submod
