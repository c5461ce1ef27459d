#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "submod/ledger.hpp"
#include "submod/rng.hpp"

namespace submod {

// Simulation of the quantum primitives: outputs are computed by classical
// scans with the correct output distributions while the ledger is charged
// the query-model costs. Wall-clock speedup is deliberately not simulated.
struct CostModelConfig {
    double c_grover = 1.0;
    double c_max = 1.0;
    double c_ae = 1.0;
    double c_prep = 1.0;
    // Setup abort budget constant; mirrors max{c1,c2,c3,4c4} with unit
    // primitive constants and a classical per-index cost of 1.
    double c_abort = 4.0;
    double delta = 0.01;  // default failure probability for standalone calls
    bool inject_ae_noise = true;
    bool inject_search_failure = false;

    void validate() const;  // throws std::domain_error on bad fields
};

struct SetupParams {
    double gamma = 0.0;     // estimate of ||u||_1, >= ||u_S||_1
    std::vector<int> s;     // head set, sorted
    double m = 0.0;         // ||u_tail||_inf
    double s_norm1 = 0.0;   // ||u_S||_1 (cached by the construction)
};

// The skewed distribution D_u(Gamma, S): mass |u_i|/Gamma on the head set,
// remainder spread over the tail proportional to |u_i|.
class SkewedDistribution {
public:
    SkewedDistribution(std::span<const double> u, double gamma, std::span<const int> s);

    double pmf(int i) const;
    double gamma() const { return gamma_; }
    double head_norm1() const { return head_norm1_; }
    double tail_norm1() const { return tail_norm1_; }
    double tail_max() const { return tail_max_; }
    bool in_head(int i) const { return head_mask_[static_cast<size_t>(i)] != 0; }
    int n() const { return static_cast<int>(u_.size()); }

private:
    std::vector<double> u_;
    std::vector<std::uint8_t> head_mask_;
    double gamma_;
    double head_norm1_ = 0.0, tail_norm1_ = 0.0, tail_max_ = 0.0;
};

// Max of |u_i|, exact by scan; charged ceil(c_max sqrt(m) ln(1/delta)).
// With failure injection on, returns the second order statistic w.p. delta.
double durr_hoyer_max(std::span<const double> u, double delta, const CostModelConfig& cfg,
                      QueryLedger& ledger, Phase phase, Rng& rng);

// Exact {i : |u_i| >= theta}; charged ceil(c_grover sqrt(bound_t n) ln(1/delta)).
// Failure injection drops one qualifying index w.p. delta.
std::vector<int> grover_above_threshold(std::span<const double> u, double theta, int bound_t,
                                        double delta, const CostModelConfig& cfg,
                                        QueryLedger& ledger, Phase phase, Rng& rng);

// l1-norm estimate: on success Gamma = ||u||_1 (1 + eps U), U ~ Uniform[-1,1];
// on failure (prob delta) Gamma ~ Uniform[0, 2||u||_1]. Exact when noise
// injection is off. Charged ceil(c_ae (1/eps) sqrt(n m_bound / ||u||_1) ln(1/delta)).
// An m_bound below ||u||_inf forces the failure branch.
double amplitude_estimate_l1(std::span<const double> u, double m_bound, double eps, double delta,
                             const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                             Rng& rng);

// One draw distributed as |u_i| / ||u_R||_1 over the restriction R (mask =
// empty span means all of [n]); rejection sampling against the envelope
// m_bound. Charged ceil(c_prep sqrt(|R| m_bound / ||u_R||_1)) per draw.
int state_prep_sample(std::span<const double> u, std::span<const std::uint8_t> mask,
                      double m_bound, const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                      Rng& rng);
// Same, with the restriction statistics precomputed by the caller.
int state_prep_sample_prestat(std::span<const double> u, std::span<const std::uint8_t> mask,
                              int r_size, double r_norm1, double m_bound,
                              const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                              Rng& rng);

// Setup parameter construction; empty optional = explicit failure (abort).
// Sub-steps run with failure parameter delta/4; a sub-step whose charge
// exceeds c_abort (sqrt(T n) + sqrt(n)/eps) ln(4/delta) aborts the run.
std::optional<SetupParams> setup_params(std::span<const double> u, int t, double eps, double delta,
                                        const CostModelConfig& cfg, QueryLedger& ledger,
                                        Phase phase, Rng& rng);

// T independent draws from D_u(Gamma, S). Head draws come from an alias
// table over u_S (|S| classical EO charged for the load), tail draws from
// state preparation. A zero tail forces the head branch, which coincides
// with the exact distribution.
std::vector<int> multisample(std::span<const double> u, int t, const SetupParams& params,
                             const CostModelConfig& cfg, QueryLedger& ledger, Phase phase,
                             Rng& rng);

// T draws from a normalized pmf (Gamma = 1): head set {p_i >= 1/T} by Grover
// search, tail max by Durr-Hoyer, then multisample.
std::vector<int> multisample_known_norm(std::span<const double> p, int t, double delta,
                                        const CostModelConfig& cfg, QueryLedger& ledger,
                                        Phase phase, Rng& rng);

}  // namespace submod
