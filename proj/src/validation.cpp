#include "submod/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "submod/cover.hpp"
#include "submod/descent.hpp"
#include "submod/lovasz.hpp"
#include "submod/quantum_sim.hpp"
#include "submod/sampling.hpp"

namespace submod {

namespace {

std::string set_to_string(const std::vector<int>& s) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
    os << "}";
    return os.str();
}

std::vector<InstanceSpec> default_corpus() {
    std::vector<InstanceSpec> corpus;
    {
        InstanceSpec s;
        s.kind = InstanceKind::AppendixA;
        corpus.push_back(s);
    }
    {
        InstanceSpec s;
        s.kind = InstanceKind::Cut;
        s.n = 10;
        s.seed = 3;
        corpus.push_back(s);
    }
    {
        InstanceSpec s;
        s.kind = InstanceKind::ConcaveCard;
        s.n = 12;
        s.phi = "sqrt_dip";
        corpus.push_back(s);
    }
    {
        InstanceSpec s;
        s.kind = InstanceKind::Coverage;
        s.n = 9;
        s.seed = 5;
        s.random_costs = true;
        corpus.push_back(s);
    }
    {
        InstanceSpec s;
        s.kind = InstanceKind::ConcaveCard;
        s.n = 24;
        s.phi = "random_concave";
        s.seed = 11;
        corpus.push_back(s);
    }
    return corpus;
}

void random_point(Rng& rng, int n, std::vector<double>& x) {
    x.resize(static_cast<size_t>(n));
    for (auto& v : x) v = rng.next_double();
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace

std::vector<SuiteResult> run_validation(const ValidateOptions& opts) {
    std::vector<SuiteResult> results;
    auto enabled = [&](const std::string& name) {
        return opts.suites.empty() ||
               std::find(opts.suites.begin(), opts.suites.end(), name) != opts.suites.end();
    };
    auto push = [&](const std::string& suite, const std::string& check, bool ok,
                    const std::string& detail) {
        results.push_back({suite, check, ok, detail});
    };

    std::vector<InstanceSpec> corpus = default_corpus();
    for (const auto& s : opts.extra_instances) corpus.push_back(s);
    std::vector<SubmodularInstance> instances;
    for (const auto& s : corpus) instances.push_back(SubmodularInstance::generate(s));

    Rng root(opts.seed);

    if (enabled("submodularity")) {
        for (const auto& inst : instances) {
            auto witness = inst.check_submodular(10000, opts.seed);
            std::ostringstream detail;
            if (witness)
                detail << "check_submodular: violated at A=" << set_to_string(witness->a)
                       << " B=" << set_to_string(witness->b) << " i=" << witness->element + 1;
            push("submodularity", "check_submodular " + inst.label(), !witness, detail.str());
            // normalization spot checks
            double f_empty = inst.evaluate(std::vector<int>{});
            push("submodularity", "normalization " + inst.label(), f_empty == 0.0,
                 f_empty == 0.0 ? "" : "F(empty) != 0");
            Rng r = root.derive(inst.label());
            bool in_range = true;
            std::vector<int> set;
            for (int trial = 0; trial < 200 && in_range; ++trial) {
                set.clear();
                for (int e = 0; e < inst.n(); ++e)
                    if (r.bernoulli(0.5)) set.push_back(e);
                in_range = std::abs(inst.evaluate(set)) <= 1.0 + 1e-9;
            }
            push("submodularity", "range " + inst.label(), in_range,
                 in_range ? "" : "|F| exceeded 1");
        }
    }

    if (enabled("lovasz")) {
        for (const auto& inst : instances) {
            const int n = inst.n();
            Rng r = root.derive("lovasz-" + inst.label());
            if (n <= 10) {
                bool vertex_ok = true;
                std::vector<double> x(static_cast<size_t>(n), 0.0);
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && vertex_ok; ++mask) {
                    for (int e = 0; e < n; ++e)
                        x[static_cast<size_t>(e)] = (mask >> e) & 1 ? 1.0 : 0.0;
                    vertex_ok = std::abs(lovasz_value(x, inst) - inst.evaluate_mask(mask)) <= 1e-9;
                }
                push("lovasz", "vertex identity " + inst.label(), vertex_ok,
                     vertex_ok ? "" : "f(1_S) != F(S)");
            }
            bool subgrad_ok = true, norm_ok = true, convex_ok = true, round_ok = true;
            std::vector<double> x, y;
            for (int trial = 0; trial < 500; ++trial) {
                random_point(r, n, x);
                random_point(r, n, y);
                double fx = lovasz_value(x, inst), fy = lovasz_value(y, inst);
                auto g = lovasz_subgradient(x, inst);
                double inner = 0.0, norm1 = 0.0;
                for (int e = 0; e < n; ++e) {
                    inner += g[static_cast<size_t>(e)] *
                             (x[static_cast<size_t>(e)] - y[static_cast<size_t>(e)]);
                    norm1 += std::abs(g[static_cast<size_t>(e)]);
                }
                subgrad_ok = subgrad_ok && inner >= fx - fy - 1e-9;
                norm_ok = norm_ok && norm1 <= 3.0 + 1e-9;
                double lam = r.next_double();
                std::vector<double> z(static_cast<size_t>(n));
                for (int e = 0; e < n; ++e)
                    z[static_cast<size_t>(e)] = lam * x[static_cast<size_t>(e)] +
                                                (1 - lam) * y[static_cast<size_t>(e)];
                convex_ok = convex_ok && lovasz_value(z, inst) <= lam * fx + (1 - lam) * fy + 1e-9;
                round_ok = round_ok && round_to_set(x, inst).value <= fx + 1e-9;
            }
            push("lovasz", "subgradient inequality " + inst.label(), subgrad_ok, "");
            push("lovasz", "norm bound " + inst.label(), norm_ok, "");
            push("lovasz", "convexity " + inst.label(), convex_ok, "");
            push("lovasz", "rounding " + inst.label(), round_ok, "");
        }
    }

    if (enabled("sampling")) {
        Rng r = root.derive("sampling");
        // alias pmf against normalized weights
        bool alias_ok = true;
        for (int trial = 0; trial < 50 && alias_ok; ++trial) {
            int k = 1 + static_cast<int>(r.next_below(8));
            std::vector<double> w(static_cast<size_t>(k));
            double total = 0.0;
            for (auto& v : w) {
                v = static_cast<double>(r.next_below(16));
                total += v;
            }
            if (total == 0.0) continue;
            auto table = AliasTable::build(w);
            for (int i = 0; i < k; ++i)
                alias_ok = alias_ok && std::abs(table.pmf(i) - w[static_cast<size_t>(i)] / total) <= 1e-12;
        }
        push("sampling", "alias pmf exactness", alias_ok, "");
        // direct estimator mean
        {
            int n = 20;
            std::vector<double> u(static_cast<size_t>(n));
            double norm1 = 0.0;
            for (auto& v : u) {
                v = 2.0 * r.next_double() - 1.0;
                norm1 += std::abs(v);
            }
            auto table = AliasTable::build(u);
            std::vector<double> mean(static_cast<size_t>(n), 0.0);
            const int draws = 200000;
            for (int d = 0; d < draws; ++d) {
                int i = table.sample(r);
                auto est = direct_estimate(norm1, u[static_cast<size_t>(i)], i);
                mean[static_cast<size_t>(est.index)] += est.magnitude / draws;
            }
            double err = 0.0;
            for (int i = 0; i < n; ++i) err = std::max(err, std::abs(mean[static_cast<size_t>(i)] - u[static_cast<size_t>(i)]));
            push("sampling", "direct estimator mean", err <= 0.05,
                 err <= 0.05 ? "" : "empirical mean off by " + std::to_string(err));
        }
        // skewed distribution: normalization and multisample faithfulness
        {
            int n = 24;
            std::vector<double> u(static_cast<size_t>(n));
            for (auto& v : u) v = r.next_double();
            double norm1 = 0.0;
            for (double v : u) norm1 += std::abs(v);
            double gamma = norm1 * 1.15;
            std::vector<int> s;
            for (int i = 0; i < n; ++i)
                if (std::abs(u[static_cast<size_t>(i)]) >= gamma / 6.0) s.push_back(i);
            SkewedDistribution dist(u, gamma, s);
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += dist.pmf(i);
            push("sampling", "skewed pmf normalization", std::abs(total - 1.0) <= 1e-12, "");

            SetupParams params;
            params.gamma = gamma;
            params.s = s;
            params.s_norm1 = dist.head_norm1();
            params.m = dist.tail_max();
            CostModelConfig cfg;
            QueryLedger ledger;
            std::vector<double> emp(static_cast<size_t>(n), 0.0);
            const int draws = 100000;
            auto idx = multisample(u, draws, params, cfg, ledger, Phase::Validate, r);
            for (int i : idx) emp[static_cast<size_t>(i)] += 1.0 / draws;
            std::vector<double> exact(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) exact[static_cast<size_t>(i)] = dist.pmf(i);
            double tv = tv_distance(emp, exact);
            push("sampling", "multisample faithfulness", tv <= 0.02,
                 "TV = " + std::to_string(tv));
        }
    }

    if (enabled("cover")) {
        Rng r = root.derive("cover");
        InstanceSpec cs;
        cs.kind = InstanceKind::Cut;
        cs.n = 12;
        cs.seed = 17;
        SubmodularInstance inst = SubmodularInstance::generate(cs);
        const int n = inst.n();
        bool sign_ok = true, norm_ok = true, update_ok = true, growth_ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x, e(static_cast<size_t>(n), 0.0);
            random_point(r, n, x);
            int k = 1 + static_cast<int>(r.next_below(3));
            for (int j = 0; j < k; ++j) {
                int i = static_cast<int>(r.next_below(static_cast<std::uint64_t>(n)));
                e[static_cast<size_t>(i)] = r.next_double() * (1.0 - x[static_cast<size_t>(i)]);
            }
            QueryLedger ledger;
            CoverStructure cover = build_cover(inst, x, e, &ledger);
            std::string why;
            if (!cover.validate(&why)) {
                push("cover", "definition", false, why);
                return results;
            }
            std::vector<double> y(x);
            for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] += e[static_cast<size_t>(i)];
            auto gx = lovasz_subgradient(x, inst);
            auto gy = lovasz_subgradient(y, inst);
            double dense_norm = 0.0;
            for (int i = 0; i < n; ++i) dense_norm += std::abs(gy[static_cast<size_t>(i)] - gx[static_cast<size_t>(i)]);
            CoverStructure::BlockNorms norms;
            cover.collect_block_norms(norms, Phase::Validate, false);
            norm_ok = norm_ok && std::abs(norms.total - dense_norm) <= 1e-10;
            for (int b = cover.first_block(); b != -1; b = cover.next_block(b)) {
                int sgn = 0;
                int el = cover.block_first(b);
                for (int c = 0; c < cover.block_size(b); ++c) {
                    double d = gy[static_cast<size_t>(el)] - gx[static_cast<size_t>(el)];
                    if (d > 1e-12) sign_ok = sign_ok && sgn >= 0, sgn = 1;
                    if (d < -1e-12) sign_ok = sign_ok && sgn <= 0, sgn = -1;
                    el = cover.point(0).next(el);
                }
            }
            // one random in-cover update against a fresh build
            int i = static_cast<int>(r.next_below(static_cast<std::uint64_t>(n)));
            double v = std::max(x[static_cast<size_t>(i)],
                                std::min(1.0, x[static_cast<size_t>(i)] + 0.3 * r.next_double()));
            int before = cover.block_count();
            cover.update_point(1, i, std::max(v, y[static_cast<size_t>(i)]));
            growth_ok = growth_ok && cover.block_count() <= before + 3;
            update_ok = update_ok && cover.validate(&why);
        }
        push("cover", "same-sign blocks", sign_ok, "");
        push("cover", "block norm identity", norm_ok, "");
        push("cover", "update validity", update_ok, "");
        push("cover", "update growth <= 3", growth_ok, "");
    }

    if (enabled("appendix-a")) {
        AppendixADemo demo = appendix_a_demo(root.derive("appendix"), 200000);
        bool naive_ok = std::abs(demo.naive_conditional_mean[0] + 0.5) <= 1e-12 &&
                        std::abs(demo.naive_conditional_mean[1] + 0.5) <= 1e-12;
        bool fixed_ok = std::abs(demo.fixed_conditional_mean[0] + 1.0) <= 1e-12 &&
                        std::abs(demo.fixed_conditional_mean[1] - 0.0) <= 1e-12;
        bool true_ok = demo.true_subgradient[0] == -1.0 && demo.true_subgradient[1] == 0.0;
        push("appendix-a", "chained estimator biased", naive_ok,
             naive_ok ? "mean (-1/2,-1/2) != g = (-1,0)" : "unexpected chained mean");
        push("appendix-a", "anchored estimator unbiased", fixed_ok, "");
        push("appendix-a", "true subgradient", true_ok, "");
    }

    return results;
}

}  // namespace submod
