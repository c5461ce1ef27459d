#include "submod/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "submod/rng.hpp"

namespace submod {

struct SubmodularInstance::Data {
    InstanceSpec spec;
    InstanceKind kind = InstanceKind::Table;
    int n = 0;
    // cut (CSR adjacency)
    std::vector<int> off, adj;
    std::vector<double> w;
    // coverage
    std::vector<int> cov_off, cov_items;
    std::vector<double> costs;
    int n_items = 0;
    // concave-of-cardinality profile (raw, by count)
    std::vector<double> phi;
    // explicit table (raw, by bitmask)
    std::vector<double> table;
};

const char* instance_kind_name(InstanceKind k) {
    switch (k) {
        case InstanceKind::AppendixA: return "appendix_a";
        case InstanceKind::Cut: return "cut";
        case InstanceKind::ConcaveCard: return "concave_card";
        case InstanceKind::Coverage: return "coverage";
        case InstanceKind::Table: return "table";
        default: return "unknown";
    }
}

SubmodularInstance::SubmodularInstance(std::shared_ptr<const Data> data, int n, double shift,
                                       double scale, std::string label)
    : data_(std::move(data)), n_(n), shift_(shift), scale_(scale), label_(std::move(label)) {}

InstanceKind SubmodularInstance::kind() const { return data_->kind; }
const InstanceSpec& SubmodularInstance::spec() const { return data_->spec; }

bool SubmodularInstance::cardinality_only() const { return data_->kind == InstanceKind::ConcaveCard; }

const double* SubmodularInstance::phi_raw() const {
    return cardinality_only() ? data_->phi.data() : nullptr;
}

double SubmodularInstance::value_by_count(int k) const {
    if (!cardinality_only()) throw std::logic_error("value_by_count: not a cardinality instance");
    if (k < 0 || k > n_) throw std::domain_error("value_by_count: count out of range");
    return (data_->phi[static_cast<size_t>(k)] - shift_) * scale_;
}

// ---------------------------------------------------------------------------
// SetEvaluator

SetEvaluator::SetEvaluator(const SubmodularInstance& inst)
    : inst_(&inst),
      in_set_(static_cast<size_t>(inst.n()), 0),
      item_hits_(static_cast<size_t>(inst.data_->n_items), 0) {}

void SetEvaluator::clear() {
    std::fill(in_set_.begin(), in_set_.end(), 0);
    std::fill(item_hits_.begin(), item_hits_.end(), 0);
    mask_ = 0;
    raw_ = 0.0;
    count_ = 0;
    const auto& d = *inst_->data_;
    if (d.kind == InstanceKind::ConcaveCard) raw_ = d.phi[0];
    if (!d.table.empty()) raw_ = d.table[0];
}

double SetEvaluator::value() const { return (raw_ - inst_->shift_) * inst_->scale_; }

double SetEvaluator::toggle(int e) { return contains(e) ? remove(e) : add(e); }

double SetEvaluator::add(int e) {
    const auto& d = *inst_->data_;
    if (e < 0 || e >= d.n) throw std::domain_error("element outside ground set");
    if (in_set_[static_cast<size_t>(e)]) throw std::domain_error("element already in set");
    in_set_[static_cast<size_t>(e)] = 1;
    ++count_;
    switch (d.kind) {
        case InstanceKind::Cut:
            for (int k = d.off[e]; k < d.off[e + 1]; ++k)
                raw_ += in_set_[static_cast<size_t>(d.adj[k])] ? -d.w[k] : d.w[k];
            break;
        case InstanceKind::Coverage:
            for (int k = d.cov_off[e]; k < d.cov_off[e + 1]; ++k)
                if (item_hits_[static_cast<size_t>(d.cov_items[k])]++ == 0) raw_ += 1.0;
            if (!d.costs.empty()) raw_ -= d.costs[static_cast<size_t>(e)];
            break;
        case InstanceKind::ConcaveCard:
            raw_ = d.phi[static_cast<size_t>(count_)];
            break;
        default:
            mask_ |= (std::uint64_t{1} << e);
            raw_ = d.table[mask_];
            break;
    }
    return value();
}

double SetEvaluator::remove(int e) {
    const auto& d = *inst_->data_;
    if (e < 0 || e >= d.n) throw std::domain_error("element outside ground set");
    if (!in_set_[static_cast<size_t>(e)]) throw std::domain_error("element not in set");
    in_set_[static_cast<size_t>(e)] = 0;
    --count_;
    switch (d.kind) {
        case InstanceKind::Cut:
            for (int k = d.off[e]; k < d.off[e + 1]; ++k)
                raw_ += in_set_[static_cast<size_t>(d.adj[k])] ? d.w[k] : -d.w[k];
            break;
        case InstanceKind::Coverage:
            for (int k = d.cov_off[e]; k < d.cov_off[e + 1]; ++k)
                if (--item_hits_[static_cast<size_t>(d.cov_items[k])] == 0) raw_ -= 1.0;
            if (!d.costs.empty()) raw_ += d.costs[static_cast<size_t>(e)];
            break;
        case InstanceKind::ConcaveCard:
            raw_ = d.phi[static_cast<size_t>(count_)];
            break;
        default:
            mask_ &= ~(std::uint64_t{1} << e);
            raw_ = d.table[mask_];
            break;
    }
    return value();
}

// ---------------------------------------------------------------------------
// Evaluation

double SubmodularInstance::evaluate(std::span<const int> set, QueryLedger* ledger,
                                    Phase phase) const {
    if (ledger) ledger->charge_classical(phase);
    if (cardinality_only()) {
        for (int e : set)
            if (e < 0 || e >= n_) throw std::domain_error("element outside ground set");
        return (data_->phi[set.size()] - shift_) * scale_;
    }
    SetEvaluator ev(*this);
    ev.clear();
    double v = ev.value();
    for (int e : set) v = ev.add(e);
    return v;
}

double SubmodularInstance::evaluate_mask(std::uint64_t mask, QueryLedger* ledger,
                                         Phase phase) const {
    if (n_ > 64) throw std::domain_error("evaluate_mask: n > 64");
    if (n_ < 64 && (mask >> n_) != 0) throw std::domain_error("element outside ground set");
    if (ledger) ledger->charge_classical(phase);
    if (!data_->table.empty()) return (data_->table[mask] - shift_) * scale_;
    SetEvaluator ev(*this);
    ev.clear();
    double v = ev.value();
    for (int e = 0; e < n_; ++e)
        if (mask & (std::uint64_t{1} << e)) v = ev.add(e);
    return v;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

std::vector<double> make_phi(const std::string& name, int n, Rng rng) {
    std::vector<double> phi(static_cast<size_t>(n) + 1, 0.0);
    if (name == "sqrt") {
        for (int k = 0; k <= n; ++k) phi[static_cast<size_t>(k)] = std::sqrt(double(k) / n);
    } else if (name == "sqrt_dip") {
        for (int k = 0; k <= n; ++k)
            phi[static_cast<size_t>(k)] = std::sqrt(double(k) / n) - 2.0 * k / n;
    } else if (name == "random_concave") {
        std::vector<double> inc(static_cast<size_t>(n));
        for (auto& d : inc) d = 2.0 * rng.next_double() - 1.0;
        std::sort(inc.begin(), inc.end(), std::greater<>());
        for (int k = 1; k <= n; ++k) phi[static_cast<size_t>(k)] = phi[k - 1] + inc[k - 1];
    } else if (name == "zero") {
        // all zeros
    } else {
        throw std::domain_error("unknown concave profile: " + name);
    }
    return phi;
}

void build_cut_csr(SubmodularInstance::Data& d, const std::vector<std::array<int, 2>>& edges,
                   const std::vector<double>& weights) {
    const int n = d.n;
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::domain_error("edge endpoint outside ground set");
        if (u == v) throw std::domain_error("self-loop edge");
        if (weights[i] < 0.0) throw std::domain_error("negative edge weight");
        ++deg[static_cast<size_t>(u)];
        ++deg[static_cast<size_t>(v)];
    }
    d.off.assign(static_cast<size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v) d.off[static_cast<size_t>(v) + 1] = d.off[v] + deg[static_cast<size_t>(v)];
    d.adj.resize(d.off[static_cast<size_t>(n)]);
    d.w.resize(d.off[static_cast<size_t>(n)]);
    std::vector<int> cur(d.off.begin(), d.off.end() - 1);
    for (size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        d.adj[static_cast<size_t>(cur[static_cast<size_t>(u)])] = v;
        d.w[static_cast<size_t>(cur[static_cast<size_t>(u)]++)] = weights[i];
        d.adj[static_cast<size_t>(cur[static_cast<size_t>(v)])] = u;
        d.w[static_cast<size_t>(cur[static_cast<size_t>(v)]++)] = weights[i];
    }
}

// Largest |raw - shift| over probe sets: exhaustive through n <= 16,
// otherwise empty/full/singletons plus seeded random subsets of random size.
double probe_max_abs(const SubmodularInstance::Data& d, double shift, std::uint64_t seed) {
    const int n = d.n;
    double best = 0.0;
    if (d.kind == InstanceKind::ConcaveCard) {
        for (double v : d.phi) best = std::max(best, std::abs(v - shift));
        return best;
    }
    if (!d.table.empty()) {
        for (double v : d.table) best = std::max(best, std::abs(v - shift));
        return best;
    }
    // Incremental raw value tracking mirrors SetEvaluator but on raw data.
    std::vector<std::uint8_t> in(static_cast<size_t>(n), 0);
    std::vector<int> hits(static_cast<size_t>(d.n_items), 0);
    double raw = 0.0;
    auto toggle = [&](int e) {
        if (d.kind == InstanceKind::Cut) {
            if (in[static_cast<size_t>(e)]) {
                in[static_cast<size_t>(e)] = 0;
                for (int k = d.off[e]; k < d.off[e + 1]; ++k)
                    raw += in[static_cast<size_t>(d.adj[k])] ? d.w[k] : -d.w[k];
            } else {
                in[static_cast<size_t>(e)] = 1;
                for (int k = d.off[e]; k < d.off[e + 1]; ++k)
                    raw += in[static_cast<size_t>(d.adj[k])] ? -d.w[k] : d.w[k];
            }
        } else {  // coverage
            if (in[static_cast<size_t>(e)]) {
                in[static_cast<size_t>(e)] = 0;
                for (int k = d.cov_off[e]; k < d.cov_off[e + 1]; ++k)
                    if (--hits[static_cast<size_t>(d.cov_items[k])] == 0) raw -= 1.0;
                if (!d.costs.empty()) raw += d.costs[static_cast<size_t>(e)];
            } else {
                in[static_cast<size_t>(e)] = 1;
                for (int k = d.cov_off[e]; k < d.cov_off[e + 1]; ++k)
                    if (hits[static_cast<size_t>(d.cov_items[k])]++ == 0) raw += 1.0;
                if (!d.costs.empty()) raw -= d.costs[static_cast<size_t>(e)];
            }
        }
    };
    if (n <= 16) {
        // Gray-code walk over all subsets.
        std::uint64_t prev = 0;
        for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
            std::uint64_t g = i ^ (i >> 1);
            std::uint64_t diff = g ^ prev;
            toggle(static_cast<int>(std::countr_zero(diff)));
            prev = g;
            best = std::max(best, std::abs(raw - shift));
        }
        return best;
    }
    Rng rng = Rng(seed).derive("normalize");
    auto consider = [&]() { best = std::max(best, std::abs(raw - shift)); };
    // full set, then singletons by removal
    for (int e = 0; e < n; ++e) toggle(e);
    consider();
    for (int e = 0; e < n; ++e) {
        toggle(e);
        consider();  // co-singleton
        toggle(e);
    }
    for (int e = 0; e < n; ++e) toggle(e);  // back to empty
    for (int e = 0; e < n; ++e) {
        toggle(e);
        consider();  // singleton
        toggle(e);
    }
    std::vector<int> members;
    for (int trial = 0; trial < 4096; ++trial) {
        int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n) + 1));
        for (int j = 0; j < k; ++j) {
            int e = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            if (!in[static_cast<size_t>(e)]) {
                toggle(e);
                members.push_back(e);
            }
        }
        consider();
        for (int e : members) toggle(e);
        members.clear();
    }
    return best;
}

}  // namespace

SubmodularInstance SubmodularInstance::generate(const InstanceSpec& spec) {
    if (spec.n <= 0) throw std::domain_error("empty ground set");
    auto d = std::make_shared<Data>();
    d->spec = spec;
    d->kind = spec.kind;
    d->n = spec.n;
    Rng rng(spec.seed);
    switch (spec.kind) {
        case InstanceKind::AppendixA: {
            d->kind = InstanceKind::Table;
            d->n = 2;
            d->table = {0.0, -0.5, 0.0, -1.0};
            break;
        }
        case InstanceKind::Table: {
            if (spec.n > 16) throw std::domain_error("table instances limited to n <= 16");
            if (spec.values.size() != (size_t{1} << spec.n))
                throw std::domain_error("table size must be 2^n");
            d->table = spec.values;
            break;
        }
        case InstanceKind::ConcaveCard: {
            d->phi = make_phi(spec.phi, spec.n, rng.derive("phi"));
            break;
        }
        case InstanceKind::Cut: {
            std::vector<std::array<int, 2>> edges = spec.edges;
            std::vector<double> weights = spec.edge_weights;
            if (edges.empty()) {
                if (spec.n < 2) throw std::domain_error("cut instance needs n >= 2");
                Rng er = rng.derive("edges");
                int m = std::max(1, spec.n * spec.random_degree / 2);
                for (int i = 0; i < m; ++i) {
                    int u = static_cast<int>(er.next_below(static_cast<std::uint64_t>(spec.n)));
                    int v;
                    do {
                        v = static_cast<int>(er.next_below(static_cast<std::uint64_t>(spec.n)));
                    } while (v == u);
                    edges.push_back({u, v});
                    weights.push_back(0.5 + er.next_double());
                }
            } else if (weights.empty()) {
                weights.assign(edges.size(), 1.0);
            }
            if (weights.size() != edges.size())
                throw std::domain_error("edge/weight length mismatch");
            build_cut_csr(*d, edges, weights);
            break;
        }
        case InstanceKind::Coverage: {
            std::vector<std::vector<int>> sets = spec.sets;
            int items = spec.items;
            if (sets.empty()) {
                Rng sr = rng.derive("sets");
                items = items > 0 ? items : 2 * spec.n;
                sets.resize(static_cast<size_t>(spec.n));
                for (auto& s : sets) {
                    while (static_cast<int>(s.size()) < std::min(spec.set_size, items)) {
                        int it = static_cast<int>(sr.next_below(static_cast<std::uint64_t>(items)));
                        if (std::find(s.begin(), s.end(), it) == s.end()) s.push_back(it);
                    }
                }
            } else {
                if (static_cast<int>(sets.size()) != spec.n)
                    throw std::domain_error("coverage needs one set per element");
                for (const auto& s : sets)
                    for (int it : s) items = std::max(items, it + 1);
            }
            d->n_items = items;
            d->cov_off.assign(static_cast<size_t>(spec.n) + 1, 0);
            for (int e = 0; e < spec.n; ++e)
                d->cov_off[static_cast<size_t>(e) + 1] =
                    d->cov_off[static_cast<size_t>(e)] + static_cast<int>(sets[static_cast<size_t>(e)].size());
            for (const auto& s : sets)
                for (int it : s) {
                    if (it < 0 || it >= items) throw std::domain_error("coverage item out of range");
                    d->cov_items.push_back(it);
                }
            if (spec.random_costs) {
                Rng cr = rng.derive("costs");
                d->costs.resize(static_cast<size_t>(spec.n));
                for (auto& c : d->costs) c = cr.next_double() * 1.2 * spec.set_size;
            }
            break;
        }
    }
    const double shift = d->table.empty() ? (d->phi.empty() ? 0.0 : d->phi[0]) : d->table[0];
    double maxabs = probe_max_abs(*d, shift, spec.seed);
    double scale = maxabs > 0.0 ? 1.0 / maxabs : 1.0;
    std::string label = std::string(instance_kind_name(spec.kind)) + "-n" + std::to_string(d->n) +
                        "-s" + std::to_string(spec.seed);
    return SubmodularInstance(std::move(d), spec.kind == InstanceKind::AppendixA ? 2 : spec.n,
                              shift, scale, std::move(label));
}

// ---------------------------------------------------------------------------
// Submodularity check

std::optional<SubmodularityWitness> SubmodularInstance::check_submodular(
    std::uint64_t sample_budget, std::uint64_t seed, CheckMode mode) const {
    const double tol = 1e-12;
    if (mode == CheckMode::Exhaustive && n_ > 16)
        throw std::length_error("exhaustive submodularity check limited to n <= 16");
    auto mask_to_set = [&](std::uint64_t m) {
        std::vector<int> s;
        for (int e = 0; e < n_; ++e)
            if (m & (std::uint64_t{1} << e)) s.push_back(e);
        return s;
    };
    if (mode == CheckMode::Exhaustive || (mode == CheckMode::Auto && n_ <= 16)) {
        // All values via one gray-code sweep, then the local pair criterion:
        // F(S+i) + F(S+j) >= F(S+i+j) + F(S) for i,j not in S.
        std::vector<double> val(size_t{1} << n_);
        SetEvaluator ev(*this);
        ev.clear();
        val[0] = ev.value();
        std::uint64_t prev = 0;
        for (std::uint64_t i = 1; i < (std::uint64_t{1} << n_); ++i) {
            std::uint64_t g = i ^ (i >> 1);
            val[g] = ev.toggle(static_cast<int>(std::countr_zero(g ^ prev)));
            prev = g;
        }
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n_); ++s) {
            for (int i = 0; i < n_; ++i) {
                if (s & (std::uint64_t{1} << i)) continue;
                for (int j = i + 1; j < n_; ++j) {
                    if (s & (std::uint64_t{1} << j)) continue;
                    std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << j;
                    double lhs = val[s | bi] - val[s];
                    double rhs = val[s | bi | bj] - val[s | bj];
                    if (lhs < rhs - tol) {
                        SubmodularityWitness w;
                        w.a = mask_to_set(s);
                        w.b = mask_to_set(s | bj);
                        w.element = i;
                        w.lhs = lhs;
                        w.rhs = rhs;
                        return w;
                    }
                }
            }
        }
        return std::nullopt;
    }
    // Randomized chains: A subset of B, i outside B.
    Rng rng = Rng(seed).derive("check");
    std::vector<int> a, b;
    for (std::uint64_t t = 0; t < sample_budget; ++t) {
        a.clear();
        b.clear();
        int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_)));
        int kb = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_)));
        for (int e = 0; e < n_; ++e) {
            if (e == i) continue;
            if (rng.next_below(static_cast<std::uint64_t>(n_)) < static_cast<std::uint64_t>(kb)) {
                b.push_back(e);
                if (rng.bernoulli(0.5)) a.push_back(e);
            }
        }
        double fa = evaluate(a), fb = evaluate(b);
        a.push_back(i);
        b.push_back(i);
        double fai = evaluate(a), fbi = evaluate(b);
        a.pop_back();
        b.pop_back();
        if (fai - fa < fbi - fb - tol) {
            SubmodularityWitness w;
            w.a = a;
            w.b = b;
            w.element = i;
            w.lhs = fai - fa;
            w.rhs = fbi - fb;
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace submod
