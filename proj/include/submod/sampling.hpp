#pragma once

#include <span>
#include <vector>

#include "submod/rng.hpp"

namespace submod {

// 1-sparse gradient estimate: magnitude * indicator(index). index < 0 encodes
// the zero estimate emitted for degenerate (all-zero) weight vectors.
struct GradientEstimate {
    int index = -1;
    double magnitude = 0.0;

    bool is_zero() const { return index < 0 || magnitude == 0.0; }
};

// Walker/Vose alias table over |weights|: O(k) one-pass construction, O(1)
// draws consuming exactly two uniform deviates each.
class AliasTable {
public:
    static AliasTable build(std::span<const double> weights);

    // In-place reconstruction reusing the buffers; for per-call tables on
    // hot paths.
    void rebuild(std::span<const double> weights);

    int size() const { return static_cast<int>(prob_.size()); }
    double total() const { return total_; }  // l1 norm of the weights

    int sample(Rng& rng) const {
        int slot = static_cast<int>(rng.next_double() * size());
        if (slot >= size()) slot = size() - 1;
        return rng.next_double() < prob_[static_cast<size_t>(slot)]
                   ? slot
                   : alias_[static_cast<size_t>(slot)];
    }

    // Exact induced pmf of slot/coin arithmetic; equals |w_i|/||w||_1 up to
    // the rounding of the construction.
    double pmf(int i) const;

    std::span<const double> prob() const { return prob_; }
    std::span<const int> alias() const { return alias_; }

private:
    std::vector<double> prob_;
    std::vector<int> alias_;
    std::vector<double> scaled_;
    std::vector<int> small_, large_;
    double total_ = 0.0;
};

// The unbiased direct estimator: given an index drawn proportional to |u_i|,
// returns ||u||_1 sgn(u_i) at that index. E = u, l2 norm = ||u||_1.
GradientEstimate direct_estimate(double u_norm1, double u_value_at_index, int sampled_index);

}  // namespace submod
