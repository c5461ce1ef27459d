#include "submod/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submod {

namespace {

std::uint64_t ceil_units(double x) {
    if (x <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::ceil(x));
}

double abs_max(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

double abs_norm1(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += std::abs(v);
    return s;
}

}  // namespace

void CostModelConfig::validate() const {
    if (!(c_grover > 0 && c_max > 0 && c_ae > 0 && c_prep > 0 && c_abort > 0))
        throw std::domain_error("cost constants must be positive");
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
}

SkewedDistribution::SkewedDistribution(std::span<const double> u, double gamma,
                                       std::span<const int> s)
    : u_(u.begin(), u.end()), gamma_(gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("Gamma must be positive");
    head_mask_.assign(u_.size(), 0);
    for (int i : s) {
        if (i < 0 || i >= n()) throw std::invalid_argument("head index out of range");
        head_mask_[static_cast<size_t>(i)] = 1;
    }
    for (int i = 0; i < n(); ++i) {
        double a = std::abs(u_[static_cast<size_t>(i)]);
        if (head_mask_[static_cast<size_t>(i)]) {
            head_norm1_ += a;
        } else {
            tail_norm1_ += a;
            tail_max_ = std::max(tail_max_, a);
        }
    }
    if (head_norm1_ > gamma_ * (1 + 1e-12))
        throw std::invalid_argument("invalid parameters: Gamma < ||u_S||_1");
    if (tail_norm1_ == 0.0 && std::abs(gamma_ - head_norm1_) > 1e-12 * std::max(1.0, gamma_))
        throw std::invalid_argument("invalid parameters: empty tail requires Gamma = ||u_S||_1");
}

double SkewedDistribution::pmf(int i) const {
    double a = std::abs(u_[static_cast<size_t>(i)]);
    if (head_mask_[static_cast<size_t>(i)]) return a / gamma_;
    if (tail_norm1_ == 0.0) return 0.0;
    return (1.0 - head_norm1_ / gamma_) * a / tail_norm1_;
}

double durr_hoyer_max(std::span<const double> u, double delta, const CostModelConfig& cfg,
                      QueryLedger& ledger, Phase phase, Rng& rng) {
    if (u.empty()) throw std::domain_error("maximum over empty range");
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
    const size_t m = u.size();
    ledger.charge_quantum(phase, ceil_units(cfg.c_max * std::sqrt(double(m)) * std::log(1.0 / delta)));
    double best = 0.0, second = 0.0;
    for (double v : u) {
        double a = std::abs(v);
        if (a > best) {
            second = best;
            best = a;
        } else if (a > second) {
            second = a;
        }
    }
    if (cfg.inject_search_failure && m > 1 && rng.bernoulli(delta)) return second;
    return best;
}

std::vector<int> grover_above_threshold(std::span<const double> u, double theta, int bound_t,
                                        double delta, const CostModelConfig& cfg,
                                        QueryLedger& ledger, Phase phase, Rng& rng) {
    if (!(theta > 0)) throw std::domain_error("threshold must be positive");
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
    const double n = static_cast<double>(u.size());
    const double bt = static_cast<double>(std::max(1, bound_t));
    ledger.charge_quantum(phase, ceil_units(cfg.c_grover * std::sqrt(bt * n) * std::log(1.0 / delta)));
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(u.size()); ++i)
        if (std::abs(u[static_cast<size_t>(i)]) >= theta) out.push_back(i);
    if (cfg.inject_search_failure && !out.empty() && rng.bernoulli(delta))
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.next_below(out.size())));
    return out;
}

double amplitude_estimate_l1(std::span<const double> u, double m_bound, double eps, double delta,
                             const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                             Rng& rng) {
    if (!(eps > 0 && eps < 1)) throw std::domain_error("eps must lie in (0,1)");
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
    const double norm1 = abs_norm1(u);
    if (norm1 == 0.0) throw std::domain_error("degenerate distribution: zero vector");
    const double n = static_cast<double>(u.size());
    const double mb = std::max(m_bound, 1e-300);
    ledger.charge_quantum(
        phase, ceil_units(cfg.c_ae * (1.0 / eps) * std::sqrt(n * mb / norm1) * std::log(1.0 / delta)));
    const bool envelope_ok = m_bound >= abs_max(u) * (1 - 1e-12);
    if (!cfg.inject_ae_noise && envelope_ok) return norm1;
    if (!envelope_ok || rng.bernoulli(delta)) return rng.next_double() * 2.0 * norm1;
    return norm1 * (1.0 + eps * (2.0 * rng.next_double() - 1.0));
}

int state_prep_sample_prestat(std::span<const double> u, std::span<const std::uint8_t> mask,
                              int r_size, double r_norm1, double m_bound,
                              const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                              Rng& rng) {
    if (r_size <= 0 || r_norm1 <= 0.0) throw std::domain_error("degenerate distribution: empty restriction");
    if (!(m_bound > 0.0)) throw std::domain_error("degenerate envelope");
    ledger.charge_quantum(
        phase, ceil_units(cfg.c_prep * std::sqrt(double(r_size) * m_bound / r_norm1)));
    const auto n = static_cast<std::uint64_t>(u.size());
    for (;;) {
        int j = static_cast<int>(rng.next_below(n));
        if (!mask.empty() && !mask[static_cast<size_t>(j)]) continue;
        if (rng.next_double() * m_bound < std::abs(u[static_cast<size_t>(j)])) return j;
    }
}

int state_prep_sample(std::span<const double> u, std::span<const std::uint8_t> mask,
                      double m_bound, const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                      Rng& rng) {
    int r_size = 0;
    double r_norm1 = 0.0, r_max = 0.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        if (!mask.empty() && !mask[static_cast<size_t>(i)]) continue;
        ++r_size;
        r_norm1 += std::abs(u[static_cast<size_t>(i)]);
        r_max = std::max(r_max, std::abs(u[static_cast<size_t>(i)]));
    }
    if (m_bound < r_max * (1 - 1e-12)) throw std::invalid_argument("envelope below restricted max");
    return state_prep_sample_prestat(u, mask, r_size, r_norm1, m_bound, cfg, ledger, phase, rng);
}

std::optional<SetupParams> setup_params(std::span<const double> u, int t, double eps, double delta,
                                        const CostModelConfig& cfg, QueryLedger& ledger,
                                        Phase phase, Rng& rng) {
    const int n = static_cast<int>(u.size());
    if (!(t > 1 && t < n)) throw std::domain_error("setup requires 1 < T < n");
    if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1))
        throw std::domain_error("eps and delta must lie in (0,1)");
    const double delta4 = delta / 4.0;
    const double budget = cfg.c_abort *
                          (std::sqrt(double(t) * n) + std::sqrt(double(n)) / eps) *
                          std::log(4.0 / delta);

    auto step_cost = [&](std::uint64_t before) { return double(ledger.quantum_eo(phase) - before); };

    std::uint64_t mark = ledger.quantum_eo(phase);
    double l_inf = durr_hoyer_max(u, delta4, cfg, ledger, phase, rng);
    if (step_cost(mark) > budget) return std::nullopt;

    const double eps_prime = std::min(1.0 / std::sqrt(double(t)), eps);
    mark = ledger.quantum_eo(phase);
    double gamma_hat = amplitude_estimate_l1(u, l_inf, eps_prime, delta4, cfg, ledger, phase, rng);
    if (step_cost(mark) > budget) return std::nullopt;

    mark = ledger.quantum_eo(phase);
    const double theta = std::max(gamma_hat, 1e-300) / t;
    std::vector<int> s_hat = grover_above_threshold(u, theta, t, delta4, cfg, ledger, phase, rng);
    if (step_cost(mark) > budget) return std::nullopt;

    // Classical load of u over the candidate head set.
    if (double(s_hat.size()) > budget) return std::nullopt;
    ledger.charge_classical(phase, s_hat.size());
    double s_hat_norm1 = 0.0;
    for (int i : s_hat) s_hat_norm1 += std::abs(u[static_cast<size_t>(i)]);
    const double gamma = std::max(s_hat_norm1, gamma_hat);

    SetupParams out;
    out.gamma = gamma;
    for (int i : s_hat)
        if (std::abs(u[static_cast<size_t>(i)]) >= gamma / t) {
            out.s.push_back(i);
            out.s_norm1 += std::abs(u[static_cast<size_t>(i)]);
        }

    std::vector<std::uint8_t> tail_mask(static_cast<size_t>(n), 1);
    for (int i : out.s) tail_mask[static_cast<size_t>(i)] = 0;
    int tail_size = n - static_cast<int>(out.s.size());
    if (tail_size > 0) {
        // Scan restricted to the tail for Durr-Hoyer; cost follows its size.
        std::vector<double> tail_vals;
        tail_vals.reserve(static_cast<size_t>(tail_size));
        for (int i = 0; i < n; ++i)
            if (tail_mask[static_cast<size_t>(i)]) tail_vals.push_back(u[static_cast<size_t>(i)]);
        mark = ledger.quantum_eo(phase);
        out.m = durr_hoyer_max(tail_vals, delta4, cfg, ledger, phase, rng);
        if (step_cost(mark) > budget) return std::nullopt;
    } else {
        out.m = 0.0;
    }
    return out;
}

std::vector<int> multisample(std::span<const double> u, int t, const SetupParams& params,
                             const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                             Rng& rng) {
    const int n = static_cast<int>(u.size());
    if (t < 1) throw std::domain_error("need at least one sample");

    // Classical load of the head-set data structure: |S| oracle reads.
    ledger.charge_classical(phase, params.s.size());
    std::vector<double> head_w;
    head_w.reserve(params.s.size());
    double head_norm1 = 0.0;
    std::vector<std::uint8_t> tail_mask(static_cast<size_t>(n), 1);
    for (int i : params.s) {
        if (i < 0 || i >= n) throw std::invalid_argument("head index out of range");
        head_w.push_back(std::abs(u[static_cast<size_t>(i)]));
        head_norm1 += head_w.back();
        tail_mask[static_cast<size_t>(i)] = 0;
    }
    if (params.gamma < head_norm1 * (1 - 1e-12))
        throw std::invalid_argument("invalid parameters: Gamma < ||u_S||_1");

    int tail_size = 0;
    double tail_norm1 = 0.0;
    for (int i = 0; i < n; ++i)
        if (tail_mask[static_cast<size_t>(i)]) {
            ++tail_size;
            tail_norm1 += std::abs(u[static_cast<size_t>(i)]);
        }

    // Degenerate tail: the head carries all mass, so the Bernoulli parameter
    // is forced to 1, matching the exact distribution.
    double p_head = tail_norm1 == 0.0 ? 1.0 : std::min(1.0, head_norm1 / params.gamma);

    AliasTable head_table = head_norm1 > 0.0 ? AliasTable::build(head_w) : AliasTable{};
    std::vector<int> out;
    out.reserve(static_cast<size_t>(t));
    for (int j = 0; j < t; ++j) {
        if (head_norm1 > 0.0 && rng.bernoulli(p_head)) {
            out.push_back(params.s[static_cast<size_t>(head_table.sample(rng))]);
        } else {
            out.push_back(state_prep_sample_prestat(u, tail_mask, tail_size, tail_norm1, params.m,
                                                    cfg, ledger, phase, rng));
        }
    }
    return out;
}

std::vector<int> multisample_known_norm(std::span<const double> p, int t, double delta,
                                        const CostModelConfig& cfg, QueryLedger& ledger,
                                        Phase phase, Rng& rng) {
    const int n = static_cast<int>(p.size());
    if (!(t > 1 && t < n)) throw std::domain_error("multisample requires 1 < T < n");
    double sum = 0.0;
    for (double v : p) {
        if (v < -1e-12) throw std::domain_error("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("pmf must sum to 1");

    SetupParams params;
    params.gamma = 1.0;
    params.s = grover_above_threshold(p, 1.0 / t, t, delta / 2.0, cfg, ledger, phase, rng);
    for (int i : params.s) params.s_norm1 += std::abs(p[static_cast<size_t>(i)]);
    std::vector<double> tail_vals;
    std::vector<std::uint8_t> head(static_cast<size_t>(n), 0);
    for (int i : params.s) head[static_cast<size_t>(i)] = 1;
    for (int i = 0; i < n; ++i)
        if (!head[static_cast<size_t>(i)]) tail_vals.push_back(p[static_cast<size_t>(i)]);
    params.m = tail_vals.empty() ? 0.0
                                 : durr_hoyer_max(tail_vals, delta / 2.0, cfg, ledger, phase, rng);
    return multisample(p, t, params, cfg, ledger, phase, rng);
}

}  // namespace submod
