#include "submod/cover.hpp"

#include <algorithm>
#include <cmath>
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

CoverStructure::CoverStructure(const SubmodularInstance& inst, QueryLedger* ledger)
    : inst_(&inst),
      ledger_(ledger),
      pts_{OrderedPoint(std::vector<double>(static_cast<size_t>(inst.n()), 0.0)),
           OrderedPoint(std::vector<double>(static_cast<size_t>(inst.n()), 0.0))},
      oracle_{PrefixOracle(inst, &pts_[0], ledger), PrefixOracle(inst, &pts_[1], ledger)} {
    reset_to_point(pts_[0]);
}

CoverStructure::CoverStructure(const CoverStructure& o)
    : inst_(o.inst_),
      ledger_(o.ledger_),
      pts_{o.pts_[0], o.pts_[1]},
      oracle_{PrefixOracle(*o.inst_, &pts_[0], o.ledger_),
              PrefixOracle(*o.inst_, &pts_[1], o.ledger_)},
      bfirst_(o.bfirst_),
      blast_(o.blast_),
      bsize_(o.bsize_),
      bfree_(o.bfree_),
      live_blocks_(o.live_blocks_),
      seq_{o.seq_[0], o.seq_[1]},
      prio_ticker_(o.prio_ticker_),
      scratch_sum_(o.scratch_sum_),
      scratch_slot_(o.scratch_slot_) {}

CoverStructure::CoverStructure(CoverStructure&& o)
    : inst_(o.inst_),
      ledger_(o.ledger_),
      pts_{std::move(o.pts_[0]), std::move(o.pts_[1])},
      oracle_{PrefixOracle(*o.inst_, &pts_[0], o.ledger_),
              PrefixOracle(*o.inst_, &pts_[1], o.ledger_)},
      bfirst_(std::move(o.bfirst_)),
      blast_(std::move(o.blast_)),
      bsize_(std::move(o.bsize_)),
      bfree_(std::move(o.bfree_)),
      live_blocks_(o.live_blocks_),
      seq_{std::move(o.seq_[0]), std::move(o.seq_[1])},
      prio_ticker_(o.prio_ticker_),
      scratch_sum_(std::move(o.scratch_sum_)),
      scratch_slot_(std::move(o.scratch_slot_)) {}

// ---------------------------------------------------------------------------
// Block pool

int CoverStructure::alloc_block(int first, int last, int size) {
    int b;
    if (!bfree_.empty()) {
        b = bfree_.back();
        bfree_.pop_back();
    } else {
        b = static_cast<int>(bfirst_.size());
        bfirst_.push_back(-1);
        blast_.push_back(-1);
        bsize_.push_back(0);
        scratch_sum_.push_back(0.0);
        scratch_slot_.push_back(0);
        for (auto& s : seq_) {
            s.l.push_back(-1);
            s.r.push_back(-1);
            s.par.push_back(-1);
            s.cnt.push_back(0);
            s.nxt.push_back(-1);
            s.prv.push_back(-1);
            s.prio.push_back(0);
        }
    }
    bfirst_[static_cast<size_t>(b)] = first;
    blast_[static_cast<size_t>(b)] = last;
    bsize_[static_cast<size_t>(b)] = size;
    for (auto& s : seq_) s.prio[static_cast<size_t>(b)] = mix64(++prio_ticker_);
    ++live_blocks_;
    return b;
}

void CoverStructure::free_block(int b) {
    bfree_.push_back(b);
    --live_blocks_;
}

void CoverStructure::clear_blocks() {
    bfree_.clear();
    for (int b = static_cast<int>(bfirst_.size()) - 1; b >= 0; --b) bfree_.push_back(b);
    live_blocks_ = 0;
    for (auto& s : seq_) {
        s.root = s.head = s.tail = -1;
        std::fill(s.l.begin(), s.l.end(), -1);
        std::fill(s.r.begin(), s.r.end(), -1);
        std::fill(s.par.begin(), s.par.end(), -1);
        std::fill(s.cnt.begin(), s.cnt.end(), 0);
        std::fill(s.nxt.begin(), s.nxt.end(), -1);
        std::fill(s.prv.begin(), s.prv.end(), -1);
    }
}

// ---------------------------------------------------------------------------
// Block-sequence treaps (position-ordered, element-count augmented)

void CoverStructure::seq_rotate_up(int side, int b) {
    Seq& s = seq_[side];
    int p = s.par[static_cast<size_t>(b)];
    int g = s.par[static_cast<size_t>(p)];
    auto fix = [&](int v) {
        int sum = bsize_[static_cast<size_t>(v)];
        if (s.l[static_cast<size_t>(v)] != -1) sum += s.cnt[static_cast<size_t>(s.l[static_cast<size_t>(v)])];
        if (s.r[static_cast<size_t>(v)] != -1) sum += s.cnt[static_cast<size_t>(s.r[static_cast<size_t>(v)])];
        s.cnt[static_cast<size_t>(v)] = sum;
    };
    if (s.l[static_cast<size_t>(p)] == b) {
        s.l[static_cast<size_t>(p)] = s.r[static_cast<size_t>(b)];
        if (s.r[static_cast<size_t>(b)] != -1) s.par[static_cast<size_t>(s.r[static_cast<size_t>(b)])] = p;
        s.r[static_cast<size_t>(b)] = p;
    } else {
        s.r[static_cast<size_t>(p)] = s.l[static_cast<size_t>(b)];
        if (s.l[static_cast<size_t>(b)] != -1) s.par[static_cast<size_t>(s.l[static_cast<size_t>(b)])] = p;
        s.l[static_cast<size_t>(b)] = p;
    }
    s.par[static_cast<size_t>(p)] = b;
    s.par[static_cast<size_t>(b)] = g;
    if (g != -1) {
        if (s.l[static_cast<size_t>(g)] == p)
            s.l[static_cast<size_t>(g)] = b;
        else
            s.r[static_cast<size_t>(g)] = b;
    } else {
        s.root = b;
    }
    fix(p);
    fix(b);
}

void CoverStructure::seq_insert_leaf_after(int side, int a, int b) {
    Seq& s = seq_[side];
    s.l[static_cast<size_t>(b)] = s.r[static_cast<size_t>(b)] = -1;
    s.cnt[static_cast<size_t>(b)] = bsize_[static_cast<size_t>(b)];
    if (s.root == -1) {
        s.root = b;
        s.par[static_cast<size_t>(b)] = -1;
        s.head = s.tail = b;
        s.nxt[static_cast<size_t>(b)] = s.prv[static_cast<size_t>(b)] = -1;
        return;
    }
    int attach, as_left;
    if (a == -1) {
        attach = s.root;
        while (s.l[static_cast<size_t>(attach)] != -1) attach = s.l[static_cast<size_t>(attach)];
        as_left = 1;
    } else if (s.r[static_cast<size_t>(a)] == -1) {
        attach = a;
        as_left = 0;
    } else {
        attach = s.r[static_cast<size_t>(a)];
        while (s.l[static_cast<size_t>(attach)] != -1) attach = s.l[static_cast<size_t>(attach)];
        as_left = 1;
    }
    s.par[static_cast<size_t>(b)] = attach;
    (as_left ? s.l[static_cast<size_t>(attach)] : s.r[static_cast<size_t>(attach)]) = b;
    for (int v = attach; v != -1; v = s.par[static_cast<size_t>(v)])
        s.cnt[static_cast<size_t>(v)] += bsize_[static_cast<size_t>(b)];
    while (s.par[static_cast<size_t>(b)] != -1 &&
           s.prio[static_cast<size_t>(b)] > s.prio[static_cast<size_t>(s.par[static_cast<size_t>(b)])])
        seq_rotate_up(side, b);
    // list splice
    int nx = (a == -1) ? s.head : s.nxt[static_cast<size_t>(a)];
    s.prv[static_cast<size_t>(b)] = a;
    s.nxt[static_cast<size_t>(b)] = nx;
    if (a != -1)
        s.nxt[static_cast<size_t>(a)] = b;
    else
        s.head = b;
    if (nx != -1)
        s.prv[static_cast<size_t>(nx)] = b;
    else
        s.tail = b;
}

void CoverStructure::seq_insert_before(int side, int c, int b) {
    seq_insert_leaf_after(side, seq_[side].prv[static_cast<size_t>(c)], b);
}

void CoverStructure::seq_erase(int side, int b) {
    Seq& s = seq_[side];
    while (s.l[static_cast<size_t>(b)] != -1 || s.r[static_cast<size_t>(b)] != -1) {
        int lc = s.l[static_cast<size_t>(b)], rc = s.r[static_cast<size_t>(b)];
        int child = (rc == -1 || (lc != -1 && s.prio[static_cast<size_t>(lc)] > s.prio[static_cast<size_t>(rc)]))
                        ? lc
                        : rc;
        seq_rotate_up(side, child);
    }
    int p = s.par[static_cast<size_t>(b)];
    if (p == -1) {
        s.root = -1;
    } else {
        (s.l[static_cast<size_t>(p)] == b ? s.l[static_cast<size_t>(p)] : s.r[static_cast<size_t>(p)]) = -1;
        for (int v = p; v != -1; v = s.par[static_cast<size_t>(v)])
            s.cnt[static_cast<size_t>(v)] -= bsize_[static_cast<size_t>(b)];
    }
    s.par[static_cast<size_t>(b)] = -1;
    int pr = s.prv[static_cast<size_t>(b)], nx = s.nxt[static_cast<size_t>(b)];
    if (pr != -1) s.nxt[static_cast<size_t>(pr)] = nx; else s.head = nx;
    if (nx != -1) s.prv[static_cast<size_t>(nx)] = pr; else s.tail = pr;
    s.prv[static_cast<size_t>(b)] = s.nxt[static_cast<size_t>(b)] = -1;
}

void CoverStructure::seq_adjust(int side, int b, int delta) {
    Seq& s = seq_[side];
    for (int v = b; v != -1; v = s.par[static_cast<size_t>(v)]) s.cnt[static_cast<size_t>(v)] += delta;
}

int CoverStructure::seq_prefix_elems(int side, int b) const {
    const Seq& s = seq_[side];
    int before = s.l[static_cast<size_t>(b)] != -1 ? s.cnt[static_cast<size_t>(s.l[static_cast<size_t>(b)])] : 0;
    for (int v = b; s.par[static_cast<size_t>(v)] != -1; v = s.par[static_cast<size_t>(v)]) {
        int p = s.par[static_cast<size_t>(v)];
        if (s.r[static_cast<size_t>(p)] == v) {
            before += bsize_[static_cast<size_t>(p)];
            if (s.l[static_cast<size_t>(p)] != -1) before += s.cnt[static_cast<size_t>(s.l[static_cast<size_t>(p)])];
        }
    }
    return before;
}

std::pair<int, int> CoverStructure::seq_find_by_rank(int side, int rank) const {
    const Seq& s = seq_[side];
    int v = s.root;
    for (;;) {
        int lc = s.l[static_cast<size_t>(v)];
        int lcnt = lc != -1 ? s.cnt[static_cast<size_t>(lc)] : 0;
        if (rank <= lcnt) {
            v = lc;
            continue;
        }
        rank -= lcnt;
        if (rank <= bsize_[static_cast<size_t>(v)]) return {v, rank};
        rank -= bsize_[static_cast<size_t>(v)];
        v = s.r[static_cast<size_t>(v)];
    }
}

// ---------------------------------------------------------------------------
// Construction

void CoverStructure::reset_to_point(const OrderedPoint& p) {
    if (&p != &pts_[0]) pts_[0] = p;
    if (&p != &pts_[1]) pts_[1] = p;
    clear_blocks();
    int b = alloc_block(pts_[0].first(), pts_[0].last(), n());
    seq_insert_leaf_after(0, -1, b);
    seq_insert_leaf_after(1, -1, b);
}

void CoverStructure::build(std::span<const double> x, std::span<const double> y) {
    if (static_cast<int>(x.size()) != n() || static_cast<int>(y.size()) != n())
        throw std::invalid_argument("point size mismatch");
    pts_[0] = OrderedPoint(x);
    pts_[1] = OrderedPoint(y);
    clear_blocks();

    std::vector<int> eb(static_cast<size_t>(n()), -1);
    int run_first = -1, run_last = -1, run_size = 0;
    int p_tail_block = -1;
    auto emit = [&](int first, int last, int size) {
        int b = alloc_block(first, last, size);
        for (int e = first;; e = pts_[0].next(e)) {
            eb[static_cast<size_t>(e)] = b;
            if (e == last) break;
        }
        seq_insert_leaf_after(0, p_tail_block, b);
        p_tail_block = b;
    };
    for (int e = pts_[0].first(); e != -1; e = pts_[0].next(e)) {
        bool changed = pts_[0].value(e) != pts_[1].value(e);
        if (changed) {
            if (run_size > 0) emit(run_first, run_last, run_size);
            run_size = 0;
            emit(e, e, 1);
            continue;
        }
        if (run_size > 0 && pts_[1].prev(e) == run_last) {
            run_last = e;
            ++run_size;
        } else {
            if (run_size > 0) emit(run_first, run_last, run_size);
            run_first = run_last = e;
            run_size = 1;
        }
    }
    if (run_size > 0) emit(run_first, run_last, run_size);

    int q_tail_block = -1, last_seen = -1;
    for (int e = pts_[1].first(); e != -1; e = pts_[1].next(e)) {
        int b = eb[static_cast<size_t>(e)];
        if (b != last_seen) {
            seq_insert_leaf_after(1, q_tail_block, b);
            q_tail_block = b;
            last_seen = b;
        }
    }
}

CoverStructure build_cover(const SubmodularInstance& inst, std::span<const double> x,
                           std::span<const double> e, QueryLedger* ledger) {
    if (static_cast<int>(x.size()) != inst.n() || static_cast<int>(e.size()) != inst.n())
        throw std::invalid_argument("size mismatch");
    bool has_pos = false, has_neg = false;
    std::vector<double> y(x.begin(), x.end());
    for (int i = 0; i < inst.n(); ++i) {
        if (e[static_cast<size_t>(i)] > 0) has_pos = true;
        if (e[static_cast<size_t>(i)] < 0) has_neg = true;
        y[static_cast<size_t>(i)] += e[static_cast<size_t>(i)];
        if (!(y[static_cast<size_t>(i)] >= 0.0 && y[static_cast<size_t>(i)] <= 1.0))
            throw std::domain_error("x + e leaves the hypercube");
    }
    if (has_pos && has_neg)
        throw std::invalid_argument("mixed-sign difference: split into positive and negative parts");
    CoverStructure cs(inst, ledger);
    cs.build(x, y);
    return cs;
}

// ---------------------------------------------------------------------------
// Queries

std::pair<int, int> CoverStructure::block_interval(int side, int b) const {
    int before = seq_prefix_elems(side, b);
    return {before + 1, before + bsize_[static_cast<size_t>(b)]};
}

void CoverStructure::collect_block_norms(BlockNorms& out, Phase phase, bool charged) {
    out.ids.clear();
    out.norms.clear();
    out.total = 0.0;
    double prev = 0.0;
    int cum = 0, slot = 0;
    for (int b = seq_[0].head; b != -1; b = seq_[0].nxt[static_cast<size_t>(b)]) {
        cum += bsize_[static_cast<size_t>(b)];
        double f = charged ? oracle_[0].query(cum, phase) : oracle_[0].value(cum);
        scratch_sum_[static_cast<size_t>(b)] = f - prev;
        prev = f;
        scratch_slot_[static_cast<size_t>(b)] = slot++;
        out.ids.push_back(b);
    }
    out.norms.assign(out.ids.size(), 0.0);
    prev = 0.0;
    cum = 0;
    for (int b = seq_[1].head; b != -1; b = seq_[1].nxt[static_cast<size_t>(b)]) {
        cum += bsize_[static_cast<size_t>(b)];
        double f = charged ? oracle_[1].query(cum, phase) : oracle_[1].value(cum);
        double sum_y = f - prev;
        prev = f;
        double nrm = std::abs(sum_y - scratch_sum_[static_cast<size_t>(b)]);
        out.norms[static_cast<size_t>(scratch_slot_[static_cast<size_t>(b)])] = nrm;
        out.total += nrm;
    }
}

double CoverStructure::subnorm(int b, Phase phase) {
    auto [pa, pb] = block_interval(0, b);
    auto [qa, qb] = block_interval(1, b);
    double sum_x = prefix_q(0, pa - 1, phase);
    sum_x = prefix_q(0, pb, phase) - sum_x;
    double sum_y = prefix_q(1, qa - 1, phase);
    sum_y = prefix_q(1, qb, phase) - sum_y;
    return std::abs(sum_y - sum_x);
}

int CoverStructure::subsample(int b, Rng& rng, Phase phase) {
    if (bsize_[static_cast<size_t>(b)] == 1) return bfirst_[static_cast<size_t>(b)];
    auto [pa, pb] = block_interval(0, b);
    auto [qa, qb] = block_interval(1, b);
    const int qoff = qa - pa;
    int lo = pa, hi = pb;
    double fxlo = prefix_q(0, lo - 1, phase);
    double fxhi = prefix_q(0, hi, phase);
    double fylo = prefix_q(1, lo - 1 + qoff, phase);
    double fyhi = prefix_q(1, hi + qoff, phase);
    const OrderedPoint& px = pts_[0];
    int node = px.root();
    int base = 0;
    for (;;) {
        int rank = base + px.subtree_size(px.left(node)) + 1;
        if (rank > hi) {
            node = px.left(node);
            continue;
        }
        if (rank < lo) {
            base = rank;
            node = px.right(node);
            continue;
        }
        double fxr1 = prefix_q(0, rank - 1, phase);
        double fxr = prefix_q(0, rank, phase);
        double fyr1 = prefix_q(1, rank - 1 + qoff, phase);
        double fyr = prefix_q(1, rank + qoff, phase);
        double wa = rank > lo ? std::abs((fyr1 - fylo) - (fxr1 - fxlo)) : 0.0;
        double wb = std::abs((fyr - fyr1) - (fxr - fxr1));
        double wc = rank < hi ? std::abs((fyhi - fyr) - (fxhi - fxr)) : 0.0;
        double total = wa + wb + wc;
        if (total <= 0.0) return node;  // numerically dead range
        double d = rng.next_double() * total;
        if (d < wa) {
            hi = rank - 1;
            fxhi = fxr1;
            fyhi = fyr1;
            node = px.left(node);
            continue;
        }
        d -= wa;
        if (d < wb) return node;
        lo = rank + 1;
        fxlo = fxr;
        fylo = fyr;
        base = rank;
        node = px.right(node);
    }
}

double CoverStructure::signed_diff(int elem, Phase phase) {
    int r = pts_[0].rank(elem);
    int q = pts_[1].rank(elem);
    double gx = -prefix_q(0, r - 1, phase);
    gx += prefix_q(0, r, phase);
    double gy = -prefix_q(1, q - 1, phase);
    gy += prefix_q(1, q, phase);
    return gy - gx;
}

// ---------------------------------------------------------------------------
// Update

void CoverStructure::update_point(int side, int elem, double new_value) {
    OrderedPoint& pt = pts_[side];
    if (pt.value(elem) == new_value) return;

    int r_old = pt.rank(elem);
    auto [b, off] = seq_find_by_rank(side, r_old);

    // Split the source block around elem in both sequences.
    int old_size = bsize_[static_cast<size_t>(b)];
    if (old_size > 1) {
        if (off > 1) {
            int lf = bfirst_[static_cast<size_t>(b)];
            int ll = pt.prev(elem);
            int L = alloc_block(lf, ll, off - 1);
            seq_insert_before(0, b, L);
            seq_insert_before(1, b, L);
        }
        if (off < old_size) {
            int rf = pt.next(elem);
            int rl = blast_[static_cast<size_t>(b)];
            int R = alloc_block(rf, rl, old_size - off);
            seq_insert_leaf_after(0, b, R);
            seq_insert_leaf_after(1, b, R);
        }
        seq_adjust(0, b, 1 - old_size);
        seq_adjust(1, b, 1 - old_size);
        bsize_[static_cast<size_t>(b)] = 1;
        bfirst_[static_cast<size_t>(b)] = blast_[static_cast<size_t>(b)] = elem;
    }

    pt.move_value(elem, new_value);

    // Re-place the singleton in this side's sequence only; the other order
    // did not change.
    seq_erase(side, b);
    int a = pt.prev(elem), c = pt.next(elem);
    if (a == -1) {
        seq_insert_leaf_after(side, -1, b);
        return;
    }
    if (c == -1) {
        seq_insert_leaf_after(side, seq_[side].tail, b);
        return;
    }
    int ra = pt.rank(a);  // a precedes elem, so its rank ignores the move
    auto [ba, offa] = seq_find_by_rank(side, ra);
    auto [bc, offc] = seq_find_by_rank(side, ra + 1);
    (void)offc;
    if (ba == bc) {
        // Landed strictly inside a block: split it at the landing boundary
        // in both sequences, then drop the singleton between the halves.
        int oldsz = bsize_[static_cast<size_t>(ba)];
        int D2 = alloc_block(c, blast_[static_cast<size_t>(ba)], oldsz - offa);
        seq_insert_leaf_after(0, ba, D2);
        seq_insert_leaf_after(1, ba, D2);
        blast_[static_cast<size_t>(ba)] = a;
        seq_adjust(0, ba, offa - oldsz);
        seq_adjust(1, ba, offa - oldsz);
        bsize_[static_cast<size_t>(ba)] = offa;
        seq_insert_leaf_after(side, ba, b);
    } else {
        seq_insert_leaf_after(side, ba, b);
    }
}

// ---------------------------------------------------------------------------
// Validation

bool CoverStructure::validate(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    int total = 0;
    std::vector<std::uint8_t> seen(static_cast<size_t>(n()), 0);
    int cum = 0;
    for (int b = seq_[0].head; b != -1; b = seq_[0].nxt[static_cast<size_t>(b)]) {
        int sz = bsize_[static_cast<size_t>(b)];
        if (sz <= 0) return fail("empty block in sequence");
        auto [pa, pb] = block_interval(0, b);
        if (pa != cum + 1) return fail("x-interval mismatch with walk order");
        cum = pb;
        // chain of the block under x
        int e = bfirst_[static_cast<size_t>(b)];
        int steps = 1;
        if (pts_[0].rank(e) != pa) return fail("block first element rank mismatch");
        while (e != blast_[static_cast<size_t>(b)]) {
            e = pts_[0].next(e);
            if (e == -1) return fail("block chain broken under x");
            ++steps;
        }
        if (steps != sz) return fail("block size does not match chain length");
        // same-chain and equal-values requirements for multi blocks
        if (sz > 1) {
            int ex = bfirst_[static_cast<size_t>(b)];
            int ey = bfirst_[static_cast<size_t>(b)];
            for (int k = 0; k < sz; ++k) {
                if (ex != ey) return fail("block order differs between x and y");
                if (pts_[0].value(ex) != pts_[1].value(ex))
                    return fail("x != y inside a non-singleton block");
                if (k + 1 < sz) {
                    ex = pts_[0].next(ex);
                    ey = pts_[1].next(ey);
                }
            }
        }
        // y-rank contiguity
        auto [qa, qb] = block_interval(1, b);
        if (pts_[1].rank(bfirst_[static_cast<size_t>(b)]) != qa)
            return fail("y-interval start mismatch");
        if (pts_[1].rank(blast_[static_cast<size_t>(b)]) != qb) return fail("y-interval end mismatch");
        total += sz;
        for (int k = 0, el = bfirst_[static_cast<size_t>(b)]; k < sz; ++k, el = pts_[0].next(el)) {
            if (seen[static_cast<size_t>(el)]) return fail("element in two blocks");
            seen[static_cast<size_t>(el)] = 1;
        }
    }
    if (total != n()) return fail("blocks do not partition the ground set");
    // y-walk must also tile [n]
    cum = 0;
    for (int b = seq_[1].head; b != -1; b = seq_[1].nxt[static_cast<size_t>(b)]) {
        auto [qa, qb] = block_interval(1, b);
        if (qa != cum + 1) return fail("y-interval mismatch with walk order");
        cum = qb;
    }
    if (cum != n()) return fail("y walk does not tile the ground set");
    return true;
}

}  // namespace submod
