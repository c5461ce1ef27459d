#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "submod/instance.hpp"
#include "submod/ledger.hpp"
#include "submod/ordered_point.hpp"
#include "submod/prefix_oracle.hpp"
#include "submod/rng.hpp"

namespace submod {

// Bundle for a monotone pair (x, y): the two ordered points with their
// prefix oracles and a cover of (x, y) whose blocks are rank-consecutive
// under both consistent permutations, with x = y on every non-singleton
// block. Blocks live in a pool; two order-maintained treaps (one per point)
// keep the block sequences with subtree element counts, so rank intervals
// are O(log k) one-off and O(1) amortized along a walk.
class CoverStructure {
public:
    CoverStructure(const SubmodularInstance& inst, QueryLedger* ledger);

    // The oracles point into this object's own points; copies and moves
    // rebind them (scan caches start cold, which is only a cost).
    CoverStructure(const CoverStructure& o);
    CoverStructure(CoverStructure&& o);
    CoverStructure& operator=(const CoverStructure&) = delete;
    CoverStructure& operator=(CoverStructure&&) = delete;

    // Rebuild for an arbitrary pair: changed coordinates become singletons,
    // unchanged coordinates group into maximal runs contiguous in both
    // orders. For a k-sparse difference this yields at most 3k+1 blocks.
    void build(std::span<const double> x, std::span<const double> y);

    // Reset to the coincident pair (p, p) with the single-block cover {[n]}.
    void reset_to_point(const OrderedPoint& p);

    int n() const { return inst_->n(); }
    int block_count() const { return live_blocks_; }

    // Block walk in x-permutation order.
    int first_block() const { return seq_[0].head; }
    int next_block(int b) const { return seq_[0].nxt[static_cast<size_t>(b)]; }
    int block_size(int b) const { return bsize_[static_cast<size_t>(b)]; }
    int block_first(int b) const { return bfirst_[static_cast<size_t>(b)]; }
    int block_last(int b) const { return blast_[static_cast<size_t>(b)]; }
    // 1-based closed rank interval of block b under point `side` (0=x, 1=y).
    std::pair<int, int> block_interval(int side, int b) const;

    const OrderedPoint& point(int side) const { return pts_[side]; }

    struct BlockNorms {
        std::vector<int> ids;
        std::vector<double> norms;
        double total = 0.0;
    };

    // All block norms ||g(y)_Is - g(x)_Is||_1 via one boundary walk per
    // point (one oracle query per block per side). `charged` selects real
    // oracle queries vs simulator peeks.
    void collect_block_norms(BlockNorms& out, Phase phase, bool charged);

    // One-off norm of a single block; telescoping at the blocks rank
    // boundaries, O(log k) + four oracle queries.
    double subnorm(int b, Phase phase);

    // Sample an element of block b proportional to |g(y)_i - g(x)_i| by the
    // three-way descent of the x rank tree; O(log n) queries.
    int subsample(int b, Rng& rng, Phase phase);

    // g(y)_i - g(x)_i readout (four queries, two rank lookups).
    double signed_diff(int elem, Phase phase);

    // Move coordinate `elem` of point `side` to new_value, splitting blocks
    // so the cover stays valid; grows the cover by at most three blocks.
    void update_point(int side, int elem, double new_value);

    // Definition checker used by tests and the validation suites.
    bool validate(std::string* why = nullptr) const;

private:
    struct Seq {
        std::vector<int> l, r, par, cnt, nxt, prv;
        std::vector<std::uint64_t> prio;
        int root = -1, head = -1, tail = -1;
    };

    int alloc_block(int first, int last, int size);
    void free_block(int b);
    void clear_blocks();

    void seq_rotate_up(int side, int b);
    void seq_insert_leaf_after(int side, int a, int b);  // a = -1 inserts at head
    void seq_insert_before(int side, int c, int b);
    void seq_erase(int side, int b);
    void seq_adjust(int side, int b, int delta);
    int seq_prefix_elems(int side, int b) const;
    std::pair<int, int> seq_find_by_rank(int side, int rank) const;  // (block, 1-based offset)

    double prefix_q(int side, int i, Phase phase) {
        return i <= 0 ? 0.0 : oracle_[side].query(i, phase);
    }
    double prefix_peek(int side, int i) { return i <= 0 ? 0.0 : oracle_[side].value(i); }

    const SubmodularInstance* inst_;
    QueryLedger* ledger_;
    OrderedPoint pts_[2];
    PrefixOracle oracle_[2];

    std::vector<int> bfirst_, blast_, bsize_;
    std::vector<int> bfree_;
    int live_blocks_ = 0;
    Seq seq_[2];
    std::uint64_t prio_ticker_ = 0x243f6a8885a308d3ULL;

    std::vector<double> scratch_sum_;
    std::vector<int> scratch_slot_;
};

// Cover for (x, x+e) per the data-structure contract: e must be one-signed
// and x+e must stay inside the hypercube.
CoverStructure build_cover(const SubmodularInstance& inst, std::span<const double> x,
                           std::span<const double> e, QueryLedger* ledger);

}  // namespace submod
