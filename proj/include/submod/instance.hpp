#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "submod/ledger.hpp"

namespace submod {

enum class InstanceKind { AppendixA, Cut, ConcaveCard, Coverage, Table };

const char* instance_kind_name(InstanceKind k);

// Generator request. `n` is the ground set size; per-kind fields are used as
// documented next to each member. JSON round-trip lives in json_io.
struct InstanceSpec {
    InstanceKind kind = InstanceKind::AppendixA;
    int n = 2;
    std::uint64_t seed = 1;

    // Cut: explicit weighted edges (0-based endpoints) or, when empty, a
    // random multigraph of average degree `random_degree`.
    std::vector<std::array<int, 2>> edges;
    std::vector<double> edge_weights;
    int random_degree = 3;

    // ConcaveCard: concave profile name: sqrt | sqrt_dip | random_concave | zero.
    std::string phi = "sqrt";

    // Coverage: explicit sets (element -> covered items) or random system of
    // `items` items with `set_size` items per element; optional random
    // per-element costs turn it into coverage-minus-modular.
    std::vector<std::vector<int>> sets;
    int items = 0;
    int set_size = 3;
    bool random_costs = false;

    // Table: raw values indexed by bitmask, size 2^n (n <= 16).
    std::vector<double> values;
};

struct SubmodularityWitness {
    std::vector<int> a;  // A subset of B
    std::vector<int> b;
    int element = -1;    // i not in B
    double lhs = 0.0;    // F(A+i) - F(A)
    double rhs = 0.0;    // F(B+i) - F(B), violation when lhs < rhs
};

class SetEvaluator;

// Immutable normalized submodular instance: F(empty) = 0 and |F| <= 1 (exact
// for exhaustively normalized families, sampled otherwise). Cheap to copy.
class SubmodularInstance {
public:
    static SubmodularInstance generate(const InstanceSpec& spec);

    int n() const { return n_; }
    const std::string& label() const { return label_; }
    InstanceKind kind() const;
    const InstanceSpec& spec() const;

    // F on an explicit subset (0-based element ids). Charges one classical
    // query when a ledger is supplied.
    double evaluate(std::span<const int> set, QueryLedger* ledger = nullptr,
                    Phase phase = Phase::Other) const;
    double evaluate_mask(std::uint64_t mask, QueryLedger* ledger = nullptr,
                         Phase phase = Phase::Other) const;  // n <= 64

    // True when F depends on |S| only; prefix values then come from the rank
    // alone, which is what makes large-n runs affordable.
    bool cardinality_only() const;
    double value_by_count(int k) const;  // cardinality_only() instances

    // Auto mode is exhaustive through n <= 16 (sample_budget ignored there)
    // and randomized chain sampling above. Returns the first violating
    // triple if any. Forcing Exhaustive with n > 16 is a capacity error.
    enum class CheckMode { Auto, Exhaustive, Randomized };
    std::optional<SubmodularityWitness> check_submodular(std::uint64_t sample_budget = 10000,
                                                         std::uint64_t seed = 7,
                                                         CheckMode mode = CheckMode::Auto) const;

    double normalization_scale() const { return scale_; }
    double normalization_shift() const { return shift_; }

    // Raw cardinality profile for rank-only fast paths; nullptr otherwise.
    const double* phi_raw() const;

private:
    friend class SetEvaluator;
    struct Data;
    SubmodularInstance(std::shared_ptr<const Data> data, int n, double shift, double scale,
                       std::string label);

    std::shared_ptr<const Data> data_;
    int n_ = 0;
    double shift_ = 0.0;
    double scale_ = 1.0;
    std::string label_;
};

// Mutable incremental scan state over an immutable instance: maintains the
// current subset and its value under single-element toggles. One evaluator
// per scanning owner; instances themselves stay shareable.
class SetEvaluator {
public:
    explicit SetEvaluator(const SubmodularInstance& inst);

    void clear();
    double add(int e);
    double remove(int e);
    double toggle(int e);
    double value() const;
    bool contains(int e) const { return in_set_[static_cast<size_t>(e)] != 0; }
    int count() const { return count_; }

private:
    const SubmodularInstance* inst_;
    std::vector<std::uint8_t> in_set_;
    std::vector<int> item_hits_;  // coverage scratch
    std::uint64_t mask_ = 0;      // table scratch
    double raw_ = 0.0;
    int count_ = 0;
};

}  // namespace submod
