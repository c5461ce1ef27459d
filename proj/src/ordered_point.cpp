#include "submod/ordered_point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace submod {

namespace {
std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
}  // namespace

std::uint64_t OrderedPoint::fresh_version() {
    static std::atomic<std::uint64_t> ticker{1};
    return ticker.fetch_add(1, std::memory_order_relaxed);
}

OrderedPoint::OrderedPoint(std::span<const double> x, std::uint64_t shape_seed) {
    version_ = fresh_version();
    const int n = static_cast<int>(x.size());
    vals_.assign(x.begin(), x.end());
    for (double v : vals_)
        if (std::isnan(v)) throw std::domain_error("NaN coordinate");
    lft_.assign(static_cast<size_t>(n), -1);
    rgt_.assign(static_cast<size_t>(n), -1);
    par_.assign(static_cast<size_t>(n), -1);
    siz_.assign(static_cast<size_t>(n), 1);
    nxt_.assign(static_cast<size_t>(n), -1);
    prv_.assign(static_cast<size_t>(n), -1);
    prio_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        prio_[static_cast<size_t>(i)] = mix64(shape_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1));
    if (n == 0) return;

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key_less(a, b); });

    head_ = order.front();
    tail_ = order.back();
    for (int r = 0; r < n; ++r) {
        if (r + 1 < n) nxt_[static_cast<size_t>(order[static_cast<size_t>(r)])] = order[static_cast<size_t>(r) + 1];
        if (r > 0) prv_[static_cast<size_t>(order[static_cast<size_t>(r)])] = order[static_cast<size_t>(r) - 1];
    }

    // Cartesian-tree build over the sorted order using the rightmost spine.
    std::vector<int> spine;
    spine.reserve(static_cast<size_t>(n));
    for (int e : order) {
        int last_popped = -1;
        while (!spine.empty() && prio_[static_cast<size_t>(spine.back())] < prio_[static_cast<size_t>(e)]) {
            last_popped = spine.back();
            spine.pop_back();
        }
        if (last_popped != -1) {
            lft_[static_cast<size_t>(e)] = last_popped;
            par_[static_cast<size_t>(last_popped)] = e;
        }
        if (!spine.empty()) {
            rgt_[static_cast<size_t>(spine.back())] = e;
            par_[static_cast<size_t>(e)] = spine.back();
        }
        spine.push_back(e);
    }
    root_ = spine.front();
    // Sizes bottom-up along the sorted order would not be topological; do a
    // simple post-order with an explicit stack instead.
    std::vector<int> stack{root_}, post;
    post.reserve(static_cast<size_t>(n));
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        post.push_back(e);
        if (lft_[static_cast<size_t>(e)] != -1) stack.push_back(lft_[static_cast<size_t>(e)]);
        if (rgt_[static_cast<size_t>(e)] != -1) stack.push_back(rgt_[static_cast<size_t>(e)]);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) fix_size(*it);
}

void OrderedPoint::rotate_up(int e) {
    int p = par_[static_cast<size_t>(e)];
    int g = par_[static_cast<size_t>(p)];
    if (lft_[static_cast<size_t>(p)] == e) {
        lft_[static_cast<size_t>(p)] = rgt_[static_cast<size_t>(e)];
        if (rgt_[static_cast<size_t>(e)] != -1) par_[static_cast<size_t>(rgt_[static_cast<size_t>(e)])] = p;
        rgt_[static_cast<size_t>(e)] = p;
    } else {
        rgt_[static_cast<size_t>(p)] = lft_[static_cast<size_t>(e)];
        if (lft_[static_cast<size_t>(e)] != -1) par_[static_cast<size_t>(lft_[static_cast<size_t>(e)])] = p;
        lft_[static_cast<size_t>(e)] = p;
    }
    par_[static_cast<size_t>(p)] = e;
    par_[static_cast<size_t>(e)] = g;
    if (g != -1) {
        if (lft_[static_cast<size_t>(g)] == p)
            lft_[static_cast<size_t>(g)] = e;
        else
            rgt_[static_cast<size_t>(g)] = e;
    } else {
        root_ = e;
    }
    fix_size(p);
    fix_size(e);
}

void OrderedPoint::insert(int e) {
    lft_[static_cast<size_t>(e)] = rgt_[static_cast<size_t>(e)] = -1;
    siz_[static_cast<size_t>(e)] = 1;
    if (root_ == -1) {
        root_ = e;
        par_[static_cast<size_t>(e)] = -1;
        head_ = tail_ = e;
        nxt_[static_cast<size_t>(e)] = prv_[static_cast<size_t>(e)] = -1;
        return;
    }
    int cur = root_, p = -1;
    bool went_left = false;
    while (cur != -1) {
        p = cur;
        went_left = key_less(e, cur);
        cur = went_left ? lft_[static_cast<size_t>(cur)] : rgt_[static_cast<size_t>(cur)];
    }
    par_[static_cast<size_t>(e)] = p;
    (went_left ? lft_[static_cast<size_t>(p)] : rgt_[static_cast<size_t>(p)]) = e;
    for (int a = p; a != -1; a = par_[static_cast<size_t>(a)]) ++siz_[static_cast<size_t>(a)];
    while (par_[static_cast<size_t>(e)] != -1 &&
           prio_[static_cast<size_t>(e)] > prio_[static_cast<size_t>(par_[static_cast<size_t>(e)])])
        rotate_up(e);
    // Splice into the rank-order list next to the BST neighbors.
    int succ;
    if (rgt_[static_cast<size_t>(e)] != -1) {
        succ = rgt_[static_cast<size_t>(e)];
        while (lft_[static_cast<size_t>(succ)] != -1) succ = lft_[static_cast<size_t>(succ)];
    } else {
        succ = -1;
        for (int a = e;; ) {
            int pa = par_[static_cast<size_t>(a)];
            if (pa == -1) break;
            if (lft_[static_cast<size_t>(pa)] == a) {
                succ = pa;
                break;
            }
            a = pa;
        }
    }
    if (succ == -1) {
        prv_[static_cast<size_t>(e)] = tail_;
        nxt_[static_cast<size_t>(e)] = -1;
        if (tail_ != -1) nxt_[static_cast<size_t>(tail_)] = e;
        tail_ = e;
        if (head_ == -1) head_ = e;
    } else {
        int before = prv_[static_cast<size_t>(succ)];
        prv_[static_cast<size_t>(e)] = before;
        nxt_[static_cast<size_t>(e)] = succ;
        prv_[static_cast<size_t>(succ)] = e;
        if (before != -1)
            nxt_[static_cast<size_t>(before)] = e;
        else
            head_ = e;
    }
}

void OrderedPoint::erase(int e) {
    while (lft_[static_cast<size_t>(e)] != -1 || rgt_[static_cast<size_t>(e)] != -1) {
        int l = lft_[static_cast<size_t>(e)], r = rgt_[static_cast<size_t>(e)];
        int child = (r == -1 || (l != -1 && prio_[static_cast<size_t>(l)] > prio_[static_cast<size_t>(r)])) ? l : r;
        rotate_up(child);
    }
    int p = par_[static_cast<size_t>(e)];
    if (p == -1) {
        root_ = -1;
    } else {
        (lft_[static_cast<size_t>(p)] == e ? lft_[static_cast<size_t>(p)] : rgt_[static_cast<size_t>(p)]) = -1;
        for (int a = p; a != -1; a = par_[static_cast<size_t>(a)]) --siz_[static_cast<size_t>(a)];
    }
    par_[static_cast<size_t>(e)] = -1;
    int pr = prv_[static_cast<size_t>(e)], nx = nxt_[static_cast<size_t>(e)];
    if (pr != -1) nxt_[static_cast<size_t>(pr)] = nx; else head_ = nx;
    if (nx != -1) prv_[static_cast<size_t>(nx)] = pr; else tail_ = pr;
    prv_[static_cast<size_t>(e)] = nxt_[static_cast<size_t>(e)] = -1;
}

void OrderedPoint::move_value(int i, double v) {
    if (i < 0 || i >= n()) throw std::domain_error("element outside ground set");
    if (std::isnan(v)) throw std::domain_error("NaN coordinate");
    if (vals_[static_cast<size_t>(i)] == v) return;
    erase(i);
    vals_[static_cast<size_t>(i)] = v;
    insert(i);
    version_ = fresh_version();
}

int OrderedPoint::rank(int i) const {
    int r = subtree_size(lft_[static_cast<size_t>(i)]) + 1;
    for (int a = i; par_[static_cast<size_t>(a)] != -1; a = par_[static_cast<size_t>(a)]) {
        int p = par_[static_cast<size_t>(a)];
        if (rgt_[static_cast<size_t>(p)] == a) r += subtree_size(lft_[static_cast<size_t>(p)]) + 1;
    }
    return r;
}

int OrderedPoint::select(int r) const {
    if (r < 1 || r > n()) throw std::domain_error("rank out of range");
    int cur = root_;
    for (;;) {
        int ls = subtree_size(lft_[static_cast<size_t>(cur)]);
        if (r == ls + 1) return cur;
        if (r <= ls) {
            cur = lft_[static_cast<size_t>(cur)];
        } else {
            r -= ls + 1;
            cur = rgt_[static_cast<size_t>(cur)];
        }
    }
}

std::vector<int> OrderedPoint::permutation() const {
    std::vector<int> p;
    p.reserve(static_cast<size_t>(n()));
    for (int e = head_; e != -1; e = nxt_[static_cast<size_t>(e)]) p.push_back(e);
    return p;
}

}  // namespace submod
