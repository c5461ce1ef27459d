#include "submod/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submod {

AliasTable AliasTable::build(std::span<const double> weights) {
    AliasTable t;
    t.rebuild(weights);
    return t;
}

void AliasTable::rebuild(std::span<const double> weights) {
    const int k = static_cast<int>(weights.size());
    if (k == 0) throw std::domain_error("alias table over empty weights");
    prob_.assign(static_cast<size_t>(k), 0.0);
    alias_.assign(static_cast<size_t>(k), 0);
    double total = 0.0;
    for (double w : weights) {
        if (std::isnan(w)) throw std::domain_error("NaN weight");
        total += std::abs(w);
    }
    if (total == 0.0) throw std::domain_error("degenerate distribution: all weights zero");
    total_ = total;

    scaled_.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        scaled_[static_cast<size_t>(i)] = std::abs(weights[static_cast<size_t>(i)]) * k / total;
    small_.clear();
    large_.clear();
    for (int i = 0; i < k; ++i) (scaled_[static_cast<size_t>(i)] < 1.0 ? small_ : large_).push_back(i);
    while (!small_.empty() && !large_.empty()) {
        int s = small_.back(), l = large_.back();
        small_.pop_back();
        prob_[static_cast<size_t>(s)] = std::clamp(scaled_[static_cast<size_t>(s)], 0.0, 1.0);
        alias_[static_cast<size_t>(s)] = l;
        scaled_[static_cast<size_t>(l)] -= 1.0 - prob_[static_cast<size_t>(s)];
        if (scaled_[static_cast<size_t>(l)] < 1.0) {
            large_.pop_back();
            small_.push_back(l);
        }
    }
    // Leftovers carry probability 1 up to rounding.
    for (int s : small_) {
        prob_[static_cast<size_t>(s)] = 1.0;
        alias_[static_cast<size_t>(s)] = s;
    }
    for (int l : large_) {
        prob_[static_cast<size_t>(l)] = 1.0;
        alias_[static_cast<size_t>(l)] = l;
    }
    small_.clear();
    large_.clear();
}

double AliasTable::pmf(int i) const {
    const int k = size();
    double p = prob_[static_cast<size_t>(i)];
    for (int s = 0; s < k; ++s)
        if (alias_[static_cast<size_t>(s)] == i && s != i) p += 1.0 - prob_[static_cast<size_t>(s)];
    return p / k;
}

GradientEstimate direct_estimate(double u_norm1, double u_value_at_index, int sampled_index) {
    if (u_norm1 <= 0.0) throw std::domain_error("degenerate distribution: zero norm");
    GradientEstimate e;
    e.index = sampled_index;
    e.magnitude = u_value_at_index >= 0.0 ? u_norm1 : -u_norm1;
    return e;
}

}  // namespace submod
