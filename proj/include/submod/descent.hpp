#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "submod/cover.hpp"
#include "submod/instance.hpp"
#include "submod/ledger.hpp"
#include "submod/lovasz.hpp"
#include "submod/ordered_point.hpp"
#include "submod/quantum_sim.hpp"
#include "submod/rng.hpp"
#include "submod/sampling.hpp"

namespace submod {

enum class Mode { Classical, Quantum, Hybrid };

const char* mode_name(Mode m);
Mode mode_from_string(const std::string& s);

struct DescentConfig {
    int T = 1;            // batch length
    long long N = 1;      // iteration count
    double eta = 0.0;     // step size; <= 0 derives sqrt(n / (18^2 N))
    double eps0 = 0.0;    // GSample bias budget
    double eps1 = 0.0;    // GDSample bias budget
    double delta = 1e-6;  // per-call failure probability of quantum procedures
    Mode mode = Mode::Classical;
    std::uint64_t seed = 1;
    double epsilon = 0.0;  // headline accuracy these parameters realize
    CostModelConfig cost;

    void validate() const;
    double effective_eta(int n) const;
};

// T = ceil(sqrt(n)), N = ceil(18^2 n / eps^2), zero bias budgets.
DescentConfig preset_classical(int n, double eps);
// Fully quantum recipe: T = ceil(eps sqrt(n)), N = ceil(72^2 n / eps^2),
// eps0 = eps/4, eps1 = eps/8, delta = eps/(8N).
DescentConfig preset_quantum_full(int n, double eps);
// Hybrid recipe (quantum GSample, classical GDSample): T = ceil(n^{1/4} /
// sqrt(eps)), N = ceil(54^2 n / eps^2), eps0 = eps/3, eps1 = 0,
// delta = eps/(3N).
DescentConfig preset_hybrid(int n, double eps);
// Regime selection by eps: full quantum for eps >= n^{-1/6}, hybrid below,
// and the classical preset once eps <= n^{-1/2}.
DescentConfig preset_quantum(int n, double eps);

// The closed-form noisy-SGD bound L2^2/(2 eta N) + (eta/2) B^2 + eps Linf.
double sgd_error_bound(double l2, double linf, double b, double eta, double n_steps,
                       double eps_bias);

// Clamped coordinate update of the projected step; returns u_i.
inline double projected_coordinate_step(double x_i, double eta_g_i) {
    if (eta_g_i > x_i) return -x_i;
    if (eta_g_i < -(1.0 - x_i)) return 1.0 - x_i;
    return -eta_g_i;
}

struct SparseEntry {
    int index;
    double value;
};

struct TrajectoryStats {
    long long batches = 0;
    long long setup_failures = 0;
    double max_estimate_l2 = 0.0;
    int max_gtilde_sparsity = 0;
    int max_e_sparsity = 0;
    long long norm_violations = 0;
};

struct DescentReport {
    int n = 0;
    std::string label;
    DescentConfig config;
    std::vector<double> x_bar;
    std::vector<int> s_bar;  // 0-based, sorted
    double f_s_bar = 0.0;
    double f_x_bar_rounded = 0.0;
    std::vector<int> best_seen_set;
    double best_seen_value = 0.0;
    double bound = 0.0;
    QueryLedger ledger;
    TrajectoryStats stats;
};

// Test hook; fired after the estimate and update of each step are formed,
// before the state advances.
struct StepView {
    long long t = 0;
    int tau = 0;
    std::span<const double> x;
    std::span<const double> anchor;
    std::span<const double> e;  // x - anchor, dense
    std::span<const SparseEntry> gtilde;
    std::span<const SparseEntry> u;
};

class StepObserver {
public:
    virtual ~StepObserver() = default;
    virtual void on_step(const StepView& view) = 0;
};

DescentReport run_descent(const SubmodularInstance& inst, const DescentConfig& cfg,
                          StepObserver* observer = nullptr);

// --- the four estimate procedures, exposed for direct testing -------------

// Tracks the best prefix value actually read through charged oracle queries.
struct BestSeen {
    double value = 0.0;  // F(empty) is always available
    std::vector<int> set;
};

std::vector<GradientEstimate> gsample_classical(const SubmodularInstance& inst,
                                                const OrderedPoint& anchor, int t,
                                                QueryLedger& ledger, Rng& rng,
                                                BestSeen* best = nullptr);

struct QuantumBatch {
    std::vector<GradientEstimate> estimates;
    bool setup_failed = false;
};

QuantumBatch gsample_quantum(const SubmodularInstance& inst, const OrderedPoint& anchor, int t,
                             double eps, double delta, const CostModelConfig& cost,
                             QueryLedger& ledger, Rng& rng);

GradientEstimate gdsample_classical(CoverStructure& cover, CoverStructure::BlockNorms& scratch,
                                    AliasTable& alias_scratch, Phase phase, Rng& rng);
GradientEstimate gdsample_classical(CoverStructure& cover, Phase phase, Rng& rng);

GradientEstimate gdsample_quantum(CoverStructure& cover, CoverStructure::BlockNorms& scratch,
                                  double eps, double delta, const CostModelConfig& cost,
                                  QueryLedger& ledger, Phase phase, Rng& rng);
GradientEstimate gdsample_quantum(CoverStructure& cover, double eps, double delta,
                                  const CostModelConfig& cost, QueryLedger& ledger, Phase phase,
                                  Rng& rng);

// --- the two-coordinate counterexample demonstration ----------------------

struct AppendixADemo {
    double eta = 0.25;
    std::array<double, 2> true_subgradient{};         // g at x1 = (0, eta)
    std::array<double, 2> naive_conditional_mean{};   // chained estimator
    std::array<double, 2> fixed_conditional_mean{};   // batch-anchored estimator
    std::array<double, 2> naive_empirical{};
    std::array<double, 2> fixed_empirical{};
    long long empirical_draws = 0;
};

AppendixADemo appendix_a_demo(Rng rng, long long draws = 200000);

}  // namespace submod
