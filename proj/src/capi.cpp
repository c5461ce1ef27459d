#include "submod.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "submod/descent.hpp"
#include "submod/instance.hpp"
#include "submod/json_io.hpp"
#include "submod/lovasz.hpp"
#include "submod/quantum_sim.hpp"
#include "submod/sampling.hpp"
#include "submod/validation.hpp"

using nlohmann::ordered_json;

struct submod_instance {
    submod::SubmodularInstance inst;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
submod_status guarded(Fn&& fn) {
    try {
        fn();
        return SUBMOD_OK;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_DOMAIN;
    } catch (const std::length_error& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_CAPACITY;
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_PARSE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SUBMOD_ERR_INTERNAL;
    }
}

submod_status require(bool cond, const char* msg) {
    if (cond) return SUBMOD_OK;
    g_last_error = msg;
    return SUBMOD_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* submod_status_name(submod_status status) {
    switch (status) {
        case SUBMOD_OK: return "ok";
        case SUBMOD_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case SUBMOD_ERR_DOMAIN: return "domain_error";
        case SUBMOD_ERR_CAPACITY: return "capacity_error";
        case SUBMOD_ERR_IO: return "io_error";
        case SUBMOD_ERR_PARSE: return "parse_error";
        case SUBMOD_ERR_INTERNAL: return "internal_error";
        default: return "unknown";
    }
}

const char* submod_last_error(void) { return g_last_error.c_str(); }

const char* submod_version(void) { return "0.1.0"; }

submod_status submod_instance_from_json(const char* json_text, submod_instance** out) {
    if (auto st = require(json_text && out, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        auto spec = submod::instance_spec_from_json(json_text);
        *out = new submod_instance{submod::SubmodularInstance::generate(spec)};
    });
}

submod_status submod_instance_from_file(const char* path, submod_instance** out) {
    if (auto st = require(path && out, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        auto spec = submod::instance_spec_from_file(path);
        *out = new submod_instance{submod::SubmodularInstance::generate(spec)};
    });
}

void submod_instance_free(submod_instance* inst) { delete inst; }

int32_t submod_instance_ground_size(const submod_instance* inst) {
    return inst ? inst->inst.n() : 0;
}

const char* submod_instance_label(const submod_instance* inst) {
    return inst ? inst->inst.label().c_str() : "";
}

submod_status submod_instance_evaluate(const submod_instance* inst, const int32_t* elements,
                                       int32_t count, double* value_out) {
    if (auto st = require(inst && value_out && (count == 0 || elements), "null argument");
        st != SUBMOD_OK)
        return st;
    return guarded([&] {
        std::vector<int> set;
        set.reserve(static_cast<size_t>(count));
        for (int32_t k = 0; k < count; ++k) set.push_back(elements[k] - 1);
        *value_out = inst->inst.evaluate(set);
    });
}

submod_status submod_instance_check_submodular(const submod_instance* inst, int64_t sample_budget,
                                               int32_t* ok_out, char** witness_json_out) {
    if (auto st = require(inst && ok_out, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        auto witness = inst->inst.check_submodular(
            sample_budget > 0 ? static_cast<std::uint64_t>(sample_budget) : 10000);
        *ok_out = witness ? 0 : 1;
        if (witness && witness_json_out) {
            ordered_json j;
            ordered_json a = ordered_json::array(), b = ordered_json::array();
            for (int e : witness->a) a.push_back(e + 1);
            for (int e : witness->b) b.push_back(e + 1);
            j["A"] = a;
            j["B"] = b;
            j["i"] = witness->element + 1;
            j["lhs"] = witness->lhs;
            j["rhs"] = witness->rhs;
            *witness_json_out = dup_string(j.dump());
        } else if (witness_json_out) {
            *witness_json_out = nullptr;
        }
    });
}

submod_status submod_instance_exact_minimum(const submod_instance* inst, char** result_json_out) {
    if (auto st = require(inst && result_json_out, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        auto res = submod::exact_min_bruteforce(inst->inst);
        ordered_json j;
        ordered_json set = ordered_json::array();
        for (int e : res.set) set.push_back(e + 1);
        j["set"] = set;
        j["value"] = res.value;
        *result_json_out = dup_string(j.dump());
    });
}

submod_status submod_solve(const submod_instance* inst, const char* config_json,
                           char** report_json_out) {
    if (auto st = require(inst && config_json && report_json_out, "null argument");
        st != SUBMOD_OK)
        return st;
    return guarded([&] {
        auto cfg = submod::descent_config_from_json(config_json, inst->inst.n());
        auto report = submod::run_descent(inst->inst, cfg);
        *report_json_out = dup_string(submod::report_to_json(report));
    });
}

submod_status submod_appendix_a_demo(uint64_t seed, char** report_json_out) {
    if (auto st = require(report_json_out != nullptr, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        auto demo = submod::appendix_a_demo(submod::Rng(seed));
        ordered_json j;
        j["eta"] = demo.eta;
        j["true_subgradient"] = demo.true_subgradient;
        j["naive_conditional_mean"] = demo.naive_conditional_mean;
        j["fixed_conditional_mean"] = demo.fixed_conditional_mean;
        j["naive_empirical"] = demo.naive_empirical;
        j["fixed_empirical"] = demo.fixed_empirical;
        j["empirical_draws"] = demo.empirical_draws;
        *report_json_out = dup_string(j.dump());
    });
}

submod_status submod_sample_demo(const double* weights, int32_t n, int32_t t, uint64_t seed,
                                 const char* cost_config_json, char** report_json_out) {
    if (auto st = require(weights && report_json_out && n > 0 && t > 0, "bad arguments");
        st != SUBMOD_OK)
        return st;
    return guarded([&] {
        std::vector<double> w(weights, weights + n);
        double total = 0.0;
        for (double v : w) total += std::abs(v);
        if (total == 0.0) throw std::domain_error("degenerate weights");
        std::vector<double> pmf(w.size());
        for (size_t i = 0; i < w.size(); ++i) pmf[i] = std::abs(w[i]) / total;

        submod::CostModelConfig cost;
        if (cost_config_json) cost = submod::cost_config_from_json(cost_config_json);
        submod::Rng rng(seed);
        submod::QueryLedger ledger;

        std::vector<double> emp_classical(w.size(), 0.0), emp_quantum(w.size(), 0.0);
        auto table = submod::AliasTable::build(w);
        ledger.charge_classical(submod::Phase::SampleDemo, w.size());  // table load
        submod::Rng rng_cl = rng.derive("classical");
        for (int32_t d = 0; d < t; ++d)
            emp_classical[static_cast<size_t>(table.sample(rng_cl))] += 1.0 / t;

        submod::Rng rng_qu = rng.derive("quantum");
        std::vector<int> draws;
        if (t > 1 && t < n) {
            draws = submod::multisample_known_norm(pmf, t, cost.delta, cost, ledger,
                                                   submod::Phase::SampleDemo, rng_qu);
        } else {
            submod::SetupParams params;
            params.gamma = 1.0;
            params.m = *std::max_element(pmf.begin(), pmf.end());
            draws = submod::multisample(pmf, t, params, cost, ledger, submod::Phase::SampleDemo,
                                        rng_qu);
        }
        for (int i : draws) emp_quantum[static_cast<size_t>(i)] += 1.0 / t;

        double tv_cl = 0.0, tv_qu = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            tv_cl += std::abs(emp_classical[i] - pmf[i]);
            tv_qu += std::abs(emp_quantum[i] - pmf[i]);
        }
        tv_cl *= 0.5;
        tv_qu *= 0.5;

        ordered_json j;
        j["n"] = n;
        j["T"] = t;
        j["exact_pmf"] = pmf;
        j["empirical_pmf_classical"] = emp_classical;
        j["empirical_pmf_quantum"] = emp_quantum;
        j["tv_classical"] = tv_cl;
        j["tv_quantum"] = tv_qu;
        j["ledger"] = nlohmann::json::parse(ledger.to_json());
        *report_json_out = dup_string(j.dump());
    });
}

submod_status submod_validate(const char* options_json, char** table_json_out) {
    if (auto st = require(table_json_out != nullptr, "null argument"); st != SUBMOD_OK) return st;
    return guarded([&] {
        submod::ValidateOptions opts;
        if (options_json) {
            auto j = nlohmann::json::parse(options_json);
            if (j.contains("suites"))
                opts.suites = j["suites"].get<std::vector<std::string>>();
            if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("instances"))
                for (const auto& spec : j["instances"])
                    opts.extra_instances.push_back(submod::instance_spec_from_json(spec.dump()));
        }
        auto results = submod::run_validation(opts);
        ordered_json j;
        bool all = true;
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            all = all && r.passed;
            ordered_json e;
            e["suite"] = r.suite;
            e["check"] = r.check;
            e["passed"] = r.passed;
            e["detail"] = r.detail;
            arr.push_back(e);
        }
        j["passed"] = all;
        j["results"] = arr;
        *table_json_out = dup_string(j.dump());
    });
}

void submod_string_free(char* s) { std::free(s); }

}  // extern "C"
