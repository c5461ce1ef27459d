#include "submod/descent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "submod/prefix_oracle.hpp"

namespace submod {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Classical: return "classical";
        case Mode::Quantum: return "quantum";
        case Mode::Hybrid: return "hybrid";
        default: return "unknown";
    }
}

Mode mode_from_string(const std::string& s) {
    if (s == "classical") return Mode::Classical;
    if (s == "quantum") return Mode::Quantum;
    if (s == "hybrid") return Mode::Hybrid;
    throw std::invalid_argument("unknown mode: " + s);
}

void DescentConfig::validate() const {
    if (T <= 0 || N <= 0 || T > N) throw std::invalid_argument("need 0 < T <= N");
    if (eps0 < 0 || eps1 < 0) throw std::invalid_argument("bias budgets must be non-negative");
    if (mode != Mode::Classical) {
        if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
        if (!(eps0 > 0)) throw std::invalid_argument("quantum sampling needs eps0 > 0");
        if (mode == Mode::Quantum && !(eps1 > 0))
            throw std::invalid_argument("quantum difference sampling needs eps1 > 0");
        cost.validate();
    }
}

double DescentConfig::effective_eta(int n) const {
    if (eta > 0) return eta;
    return std::sqrt(double(n) / (18.0 * 18.0 * double(N)));
}

DescentConfig preset_classical(int n, double eps) {
    if (n < 4) throw std::invalid_argument("presets need n >= 4");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0,1]");
    DescentConfig c;
    c.mode = Mode::Classical;
    c.epsilon = eps;
    c.T = static_cast<int>(std::ceil(std::sqrt(double(n))));
    c.N = static_cast<long long>(std::ceil(18.0 * 18.0 * n / (eps * eps)));
    c.T = std::min<long long>(c.T, c.N);
    c.eps0 = c.eps1 = 0.0;
    return c;
}

namespace {
int clamp_batch(long long t, int n, long long n_steps) {
    t = std::max<long long>(t, 2);
    t = std::min<long long>(t, n - 1);
    t = std::min<long long>(t, n_steps);
    return static_cast<int>(t);
}
}  // namespace

DescentConfig preset_quantum_full(int n, double eps) {
    if (n < 4) throw std::invalid_argument("presets need n >= 4");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0,1]");
    DescentConfig c;
    c.mode = Mode::Quantum;
    c.epsilon = eps;
    c.N = static_cast<long long>(std::ceil(72.0 * 72.0 * n / (eps * eps)));
    c.T = clamp_batch(static_cast<long long>(std::ceil(eps * std::sqrt(double(n)))), n, c.N);
    c.eps0 = eps / 4.0;
    c.eps1 = eps / 8.0;
    c.delta = eps / (8.0 * double(c.N));
    return c;
}

DescentConfig preset_hybrid(int n, double eps) {
    if (n < 4) throw std::invalid_argument("presets need n >= 4");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0,1]");
    DescentConfig c;
    c.mode = Mode::Hybrid;
    c.epsilon = eps;
    c.N = static_cast<long long>(std::ceil(54.0 * 54.0 * n / (eps * eps)));
    c.T = clamp_batch(static_cast<long long>(std::ceil(std::pow(double(n), 0.25) / std::sqrt(eps))),
                      n, c.N);
    c.eps0 = eps / 3.0;
    c.eps1 = 0.0;
    c.delta = eps / (3.0 * double(c.N));
    return c;
}

DescentConfig preset_quantum(int n, double eps) {
    if (eps <= std::pow(double(n), -0.5)) return preset_classical(n, eps);
    if (eps >= std::pow(double(n), -1.0 / 6.0)) return preset_quantum_full(n, eps);
    return preset_hybrid(n, eps);
}

double sgd_error_bound(double l2, double linf, double b, double eta, double n_steps,
                       double eps_bias) {
    return l2 * l2 / (2.0 * eta * n_steps) + 0.5 * eta * b * b + eps_bias * linf;
}

// ---------------------------------------------------------------------------
// Procedures

namespace {

void offer_best(BestSeen* best, const OrderedPoint& pt, int count, double value) {
    if (!best || value >= best->value) return;
    best->value = value;
    best->set.clear();
    int e = pt.first();
    for (int k = 0; k < count; ++k) {
        best->set.push_back(e);
        e = pt.next(e);
    }
    std::sort(best->set.begin(), best->set.end());
}

// Dense Lovasz subgradient at the point; charged = real queries.
void dense_subgradient(const SubmodularInstance& inst, const OrderedPoint& pt,
                       QueryLedger* ledger, bool charged, Phase phase, std::vector<double>& g,
                       double& norm1, BestSeen* best) {
    const int n = inst.n();
    g.assign(static_cast<size_t>(n), 0.0);
    PrefixOracle oracle(inst, &pt, ledger);
    double prev = 0.0;
    norm1 = 0.0;
    int e = pt.first();
    for (int i = 1; i <= n; ++i) {
        double cur = charged ? oracle.query(i, phase) : oracle.value(i);
        if (charged) offer_best(best, pt, i, cur);
        g[static_cast<size_t>(e)] = cur - prev;
        norm1 += std::abs(cur - prev);
        prev = cur;
        e = pt.next(e);
    }
}

}  // namespace

std::vector<GradientEstimate> gsample_classical(const SubmodularInstance& inst,
                                                const OrderedPoint& anchor, int t,
                                                QueryLedger& ledger, Rng& rng, BestSeen* best) {
    std::vector<double> g;
    double norm1 = 0.0;
    dense_subgradient(inst, anchor, &ledger, true, Phase::GSample, g, norm1, best);
    std::vector<GradientEstimate> out(static_cast<size_t>(t));
    if (norm1 == 0.0) return out;  // stationary along prefix directions
    AliasTable table = AliasTable::build(g);
    for (auto& est : out) {
        int i = table.sample(rng);
        est = direct_estimate(norm1, g[static_cast<size_t>(i)], i);
    }
    return out;
}

QuantumBatch gsample_quantum(const SubmodularInstance& inst, const OrderedPoint& anchor, int t,
                             double eps, double delta, const CostModelConfig& cost,
                             QueryLedger& ledger, Rng& rng) {
    QuantumBatch out;
    out.estimates.resize(static_cast<size_t>(t));
    std::vector<double> g;
    double norm1 = 0.0;
    dense_subgradient(inst, anchor, nullptr, false, Phase::GSample, g, norm1, nullptr);
    if (norm1 == 0.0) return out;
    auto params = setup_params(g, t, eps / 3.0, delta, cost, ledger, Phase::GSample, rng);
    if (!params) {
        out.setup_failed = true;
        return out;  // the failure mass is carried by the delta budget
    }
    std::vector<int> idx = multisample(g, t, *params, cost, ledger, Phase::GSample, rng);
    PrefixOracle oracle(inst, &anchor, &ledger);
    for (int j = 0; j < t; ++j) {
        int i = idx[static_cast<size_t>(j)];
        // classical readout of the sampled coordinate's sign
        int r = anchor.rank(i);
        double lo = r > 1 ? oracle.query(r - 1, Phase::GSample) : 0.0;
        double hi = oracle.query(r, Phase::GSample);
        out.estimates[static_cast<size_t>(j)] =
            GradientEstimate{i, hi - lo >= 0 ? params->gamma : -params->gamma};
    }
    return out;
}

GradientEstimate gdsample_classical(CoverStructure& cover, CoverStructure::BlockNorms& scratch,
                                    AliasTable& alias_scratch, Phase phase, Rng& rng) {
    cover.collect_block_norms(scratch, phase, true);
    if (scratch.total == 0.0) return GradientEstimate{};
    alias_scratch.rebuild(scratch.norms);
    int slot = alias_scratch.sample(rng);
    int block = scratch.ids[static_cast<size_t>(slot)];
    int elem = cover.subsample(block, rng, phase);
    double diff = cover.signed_diff(elem, phase);
    return GradientEstimate{elem, diff >= 0 ? scratch.total : -scratch.total};
}

GradientEstimate gdsample_classical(CoverStructure& cover, Phase phase, Rng& rng) {
    CoverStructure::BlockNorms scratch;
    AliasTable alias;
    return gdsample_classical(cover, scratch, alias, phase, rng);
}

GradientEstimate gdsample_quantum(CoverStructure& cover, CoverStructure::BlockNorms& scratch,
                                  double eps, double delta, const CostModelConfig& cost,
                                  QueryLedger& ledger, Phase phase, Rng& rng) {
    cover.collect_block_norms(scratch, phase, false);
    if (scratch.total == 0.0) return GradientEstimate{};
    double m = durr_hoyer_max(scratch.norms, delta / 2.0, cost, ledger, phase, rng);
    double gamma =
        amplitude_estimate_l1(scratch.norms, m, eps / 6.0, delta / 2.0, cost, ledger, phase, rng);
    int slot = state_prep_sample_prestat(scratch.norms, {}, static_cast<int>(scratch.norms.size()),
                                         scratch.total, std::max(m, 1e-300), cost, ledger, phase,
                                         rng);
    int block = scratch.ids[static_cast<size_t>(slot)];
    int elem = cover.subsample(block, rng, phase);
    double diff = cover.signed_diff(elem, phase);
    return GradientEstimate{elem, diff >= 0 ? gamma : -gamma};
}

GradientEstimate gdsample_quantum(CoverStructure& cover, double eps, double delta,
                                  const CostModelConfig& cost, QueryLedger& ledger, Phase phase,
                                  Rng& rng) {
    CoverStructure::BlockNorms scratch;
    return gdsample_quantum(cover, scratch, eps, delta, cost, ledger, phase, rng);
}

// ---------------------------------------------------------------------------
// The descent loop

DescentReport run_descent(const SubmodularInstance& inst, const DescentConfig& cfg,
                          StepObserver* observer) {
    cfg.validate();
    const int n = inst.n();
    const double eta = cfg.effective_eta(n);
    const long long n_steps = cfg.N;
    const int t_batch = cfg.T;

    DescentReport rep;
    rep.n = n;
    rep.label = inst.label();
    rep.config = cfg;
    QueryLedger& ledger = rep.ledger;

    Rng root(cfg.seed);
    Rng rng_gs = root.derive("gsample");
    Rng rng_plus = root.derive("gds_plus");
    Rng rng_minus = root.derive("gds_minus");

    std::vector<double> x(static_cast<size_t>(n), 0.0);
    std::vector<double> xbar_acc(static_cast<size_t>(n), 0.0);
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    std::vector<int> support;
    std::vector<std::uint8_t> in_support(static_cast<size_t>(n), 0);

    OrderedPoint anchor(x);
    CoverStructure cov_plus(inst, &ledger);
    CoverStructure cov_minus(inst, &ledger);
    CoverStructure::BlockNorms scratch_plus, scratch_minus;
    AliasTable alias_plus, alias_minus;
    BestSeen best;  // starts at F(empty) = 0

    std::vector<GradientEstimate> batch;
    bool quantum_gs = cfg.mode != Mode::Classical;
    bool quantum_gds = cfg.mode == Mode::Quantum;

    std::vector<SparseEntry> gtilde, update;
    gtilde.reserve(3);
    update.reserve(3);

    for (long long t = 0; t < n_steps; ++t) {
        int tau = static_cast<int>(t % t_batch);
        if (tau == 0) {
            anchor = OrderedPoint(x);
            for (int s : support) {
                e[static_cast<size_t>(s)] = 0.0;
                in_support[static_cast<size_t>(s)] = 0;
            }
            support.clear();
            cov_plus.reset_to_point(anchor);
            cov_minus.reset_to_point(anchor);
            if (quantum_gs) {
                QuantumBatch qb = gsample_quantum(inst, anchor, t_batch, cfg.eps0, cfg.delta,
                                                  cfg.cost, ledger, rng_gs);
                if (qb.setup_failed) ++rep.stats.setup_failures;
                batch = std::move(qb.estimates);
            } else {
                batch = gsample_classical(inst, anchor, t_batch, ledger, rng_gs, &best);
            }
            ++rep.stats.batches;
        }

        gtilde.clear();
        auto push_est = [&](const GradientEstimate& est) {
            if (est.is_zero()) return;
            for (auto& entry : gtilde)
                if (entry.index == est.index) {
                    entry.value += est.magnitude;
                    return;
                }
            gtilde.push_back({est.index, est.magnitude});
        };
        push_est(batch[static_cast<size_t>(tau)]);
        if (tau != 0) {
            GradientEstimate d_plus =
                quantum_gds ? gdsample_quantum(cov_plus, scratch_plus, cfg.eps1, cfg.delta,
                                               cfg.cost, ledger, Phase::GDSamplePlus, rng_plus)
                            : gdsample_classical(cov_plus, scratch_plus, alias_plus,
                                                 Phase::GDSamplePlus, rng_plus);
            GradientEstimate d_minus =
                quantum_gds ? gdsample_quantum(cov_minus, scratch_minus, cfg.eps1, cfg.delta,
                                               cfg.cost, ledger, Phase::GDSampleMinus, rng_minus)
                            : gdsample_classical(cov_minus, scratch_minus, alias_minus,
                                                 Phase::GDSampleMinus, rng_minus);
            push_est(d_plus);
            push_est(d_minus);
        }

        double l2sq = 0.0;
        for (const auto& entry : gtilde) l2sq += entry.value * entry.value;
        double l2 = std::sqrt(l2sq);
        rep.stats.max_estimate_l2 = std::max(rep.stats.max_estimate_l2, l2);
        rep.stats.max_gtilde_sparsity =
            std::max(rep.stats.max_gtilde_sparsity, static_cast<int>(gtilde.size()));
        if (l2 > 18.0 + 1e-9) ++rep.stats.norm_violations;

        update.clear();
        for (const auto& entry : gtilde) {
            double du = projected_coordinate_step(x[static_cast<size_t>(entry.index)],
                                                  eta * entry.value);
            if (du != 0.0) update.push_back({entry.index, du});
        }

        if (observer) {
            StepView view;
            view.t = t;
            view.tau = tau;
            view.x = x;
            view.anchor = anchor.values();
            view.e = e;
            view.gtilde = gtilde;
            view.u = update;
            observer->on_step(view);
        }

        bool last_in_batch = (tau == t_batch - 1) || (t == n_steps - 1);
        for (const auto& entry : update) {
            const int i = entry.index;
            const double x_old = x[static_cast<size_t>(i)];
            const double x_new = std::clamp(x_old + entry.value, 0.0, 1.0);
            xbar_acc[static_cast<size_t>(i)] += double(n_steps - 1 - t) * (x_new - x_old);
            x[static_cast<size_t>(i)] = x_new;
            if (!in_support[static_cast<size_t>(i)]) {
                in_support[static_cast<size_t>(i)] = 1;
                support.push_back(i);
            }
            const double anchor_i = anchor.value(i);
            e[static_cast<size_t>(i)] = x_new - anchor_i;
            if (last_in_batch) continue;
            // mid = anchor + e_plus = max(anchor, x), kept drift-free. The
            // move order below keeps each tracked pair monotone at every
            // intermediate state.
            const double mid_old = cov_minus.point(0).value(i);
            const double mid_new = std::max(anchor_i, x_new);
            if (mid_new >= mid_old) {
                if (mid_new != mid_old) {
                    cov_plus.update_point(1, i, mid_new);
                    cov_minus.update_point(0, i, mid_new);
                }
                cov_minus.update_point(1, i, x_new);
            } else {
                cov_minus.update_point(1, i, x_new);
                cov_minus.update_point(0, i, mid_new);
                cov_plus.update_point(1, i, mid_new);
            }
        }
        if (!last_in_batch)
            rep.stats.max_e_sparsity =
                std::max(rep.stats.max_e_sparsity, static_cast<int>(support.size()));
    }

    rep.x_bar.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        rep.x_bar[static_cast<size_t>(i)] =
            std::clamp(xbar_acc[static_cast<size_t>(i)] / double(n_steps), 0.0, 1.0);

    RoundedSet rounded = round_to_set(rep.x_bar, inst, &ledger, Phase::Rounding);
    rep.f_x_bar_rounded = rounded.value;
    rep.best_seen_set = best.set;
    rep.best_seen_value = best.value;
    if (best.value < rounded.value) {
        rep.s_bar = best.set;
    } else {
        rep.s_bar = rounded.set;
    }
    rep.f_s_bar = inst.evaluate(rep.s_bar, &ledger, Phase::Rounding);
    rep.bound = sgd_error_bound(std::sqrt(double(n)), 1.0, 18.0, eta, double(n_steps),
                                cfg.eps0 + 2.0 * cfg.eps1);
    return rep;
}

// ---------------------------------------------------------------------------
// Counterexample demonstration

AppendixADemo appendix_a_demo(Rng rng, long long draws) {
    AppendixADemo out;
    InstanceSpec spec;
    spec.kind = InstanceKind::AppendixA;
    SubmodularInstance inst = SubmodularInstance::generate(spec);

    const double eta = out.eta;
    std::vector<double> x0{0.0, 0.0};
    std::vector<double> x1{0.0, eta};  // reached when the first draw hits coordinate 2

    std::vector<double> g0 = lovasz_subgradient(x0, inst);
    std::vector<double> g1 = lovasz_subgradient(x1, inst);
    out.true_subgradient = {g1[0], g1[1]};

    // Chained estimator: conditioning on x1 = (0, eta) pins the first draw
    // to (0, -1); the difference estimate is unbiased for g1 - g0.
    std::array<double, 2> pinned{0.0, -1.0};
    out.naive_conditional_mean = {pinned[0] + (g1[0] - g0[0]), pinned[1] + (g1[1] - g0[1])};
    // Batch-anchored estimator: a fresh draw replaces the pinned one, so the
    // conditional mean recovers g0 + d1 = g1.
    out.fixed_conditional_mean = {g0[0] + (g1[0] - g0[0]), g0[1] + (g1[1] - g0[1])};

    // Empirical check by direct simulation of the two-outcome randomness.
    double d_norm1 = std::abs(g1[0] - g0[0]) + std::abs(g1[1] - g0[1]);
    double p_first = std::abs(g1[0] - g0[0]) / d_norm1;
    std::array<double, 2> naive_sum{0.0, 0.0}, fixed_sum{0.0, 0.0};
    double g0_norm1 = std::abs(g0[0]) + std::abs(g0[1]);
    for (long long it = 0; it < draws; ++it) {
        // d~ draw: 1-sparse estimate of g1 - g0
        std::array<double, 2> dtilde{0.0, 0.0};
        if (rng.next_double() < p_first)
            dtilde[0] = (g1[0] - g0[0] >= 0 ? d_norm1 : -d_norm1);
        else
            dtilde[1] = (g1[1] - g0[1] >= 0 ? d_norm1 : -d_norm1);
        naive_sum[0] += pinned[0] + dtilde[0];
        naive_sum[1] += pinned[1] + dtilde[1];
        // fresh anchored draw of g0
        std::array<double, 2> fresh{0.0, 0.0};
        if (rng.next_double() < std::abs(g0[0]) / g0_norm1)
            fresh[0] = (g0[0] >= 0 ? g0_norm1 : -g0_norm1);
        else
            fresh[1] = (g0[1] >= 0 ? g0_norm1 : -g0_norm1);
        fixed_sum[0] += fresh[0] + dtilde[0];
        fixed_sum[1] += fresh[1] + dtilde[1];
    }
    out.naive_empirical = {naive_sum[0] / double(draws), naive_sum[1] / double(draws)};
    out.fixed_empirical = {fixed_sum[0] / double(draws), fixed_sum[1] / double(draws)};
    out.empirical_draws = draws;
    return out;
}

}  // namespace submod
