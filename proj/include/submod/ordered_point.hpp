#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

namespace submod {

// A point x in [0,1]^n kept sorted by the consistent-permutation order:
// descending value, ties by ascending index. Three views are maintained
// together: the value array, a doubly linked list in rank order, and a
// size-augmented treap for O(log n) rank/select. One tree node per element,
// so element ids double as node handles.
class OrderedPoint {
public:
    OrderedPoint() = default;
    explicit OrderedPoint(std::span<const double> x, std::uint64_t shape_seed = 0x5bd1e995);

    int n() const { return static_cast<int>(vals_.size()); }
    double value(int i) const { return vals_[static_cast<size_t>(i)]; }
    std::span<const double> values() const { return vals_; }

    void move_value(int i, double v);

    int rank(int i) const;    // 1-based rank of element i
    int select(int r) const;  // element at 1-based rank r

    int first() const { return head_; }  // rank-1 element, -1 when empty
    int last() const { return tail_; }
    int next(int i) const { return nxt_[static_cast<size_t>(i)]; }
    int prev(int i) const { return prv_[static_cast<size_t>(i)]; }

    std::uint64_t version() const { return version_; }

    std::vector<int> permutation() const;

    // Tree internals for the cover subsampling descent (read-only).
    int root() const { return root_; }
    int left(int i) const { return lft_[static_cast<size_t>(i)]; }
    int right(int i) const { return rgt_[static_cast<size_t>(i)]; }
    int subtree_size(int i) const { return i < 0 ? 0 : siz_[static_cast<size_t>(i)]; }

private:
    bool key_less(int a, int b) const {
        double xa = vals_[static_cast<size_t>(a)], xb = vals_[static_cast<size_t>(b)];
        return xa > xb || (xa == xb && a < b);
    }
    void insert(int e);
    void erase(int e);
    void rotate_up(int e);
    void fix_size(int e) {
        siz_[static_cast<size_t>(e)] = 1 + subtree_size(lft_[static_cast<size_t>(e)]) +
                                       subtree_size(rgt_[static_cast<size_t>(e)]);
    }

    // Version stamps come from a process-wide ticker so that a consumer
    // caching scan state keyed by version can never alias two snapshots.
    static std::uint64_t fresh_version();

    std::vector<double> vals_;
    std::vector<int> lft_, rgt_, par_, siz_;
    std::vector<std::uint64_t> prio_;
    std::vector<int> nxt_, prv_;
    int root_ = -1, head_ = -1, tail_ = -1;
    std::uint64_t version_ = 0;
};

}  // namespace submod
