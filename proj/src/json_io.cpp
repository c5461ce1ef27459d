#include "submod/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace submod {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

InstanceKind kind_from_string(const std::string& s) {
    if (s == "appendix_a") return InstanceKind::AppendixA;
    if (s == "cut") return InstanceKind::Cut;
    if (s == "concave_card") return InstanceKind::ConcaveCard;
    if (s == "coverage") return InstanceKind::Coverage;
    if (s == "table") return InstanceKind::Table;
    throw std::invalid_argument("unknown instance kind: " + s);
}

}  // namespace

InstanceSpec instance_spec_from_json(const std::string& text) {
    json j = json::parse(text);
    InstanceSpec spec;
    spec.kind = kind_from_string(j.at("kind").get<std::string>());
    spec.n = j.value("n", spec.kind == InstanceKind::AppendixA ? 2 : 0);
    spec.seed = j.value("seed", std::uint64_t{1});
    json params = j.value("params", json::object());
    switch (spec.kind) {
        case InstanceKind::AppendixA:
            spec.n = 2;
            break;
        case InstanceKind::Cut:
            if (params.contains("edges")) {
                for (const auto& e : params["edges"]) {
                    int u = e.at(0).get<int>(), v = e.at(1).get<int>();
                    double w = e.size() > 2 ? e.at(2).get<double>() : 1.0;
                    spec.edges.push_back({u - 1, v - 1});
                    spec.edge_weights.push_back(w);
                }
            }
            spec.random_degree = params.value("random_degree", 3);
            break;
        case InstanceKind::ConcaveCard:
            spec.phi = params.value("phi", "sqrt");
            break;
        case InstanceKind::Coverage:
            if (params.contains("sets")) {
                for (const auto& s : params["sets"]) {
                    std::vector<int> items;
                    for (const auto& it : s) items.push_back(it.get<int>() - 1);
                    spec.sets.push_back(std::move(items));
                }
            }
            spec.items = params.value("items", 0);
            spec.set_size = params.value("set_size", 3);
            spec.random_costs = params.value("random_costs", false);
            break;
        case InstanceKind::Table:
            spec.values = params.at("values").get<std::vector<double>>();
            break;
    }
    return spec;
}

std::string instance_spec_to_json(const InstanceSpec& spec) {
    ordered_json j;
    j["kind"] = instance_kind_name(spec.kind);
    j["n"] = spec.n;
    j["seed"] = spec.seed;
    ordered_json params = ordered_json::object();
    switch (spec.kind) {
        case InstanceKind::AppendixA:
            break;
        case InstanceKind::Cut:
            if (!spec.edges.empty()) {
                ordered_json edges = ordered_json::array();
                for (size_t i = 0; i < spec.edges.size(); ++i)
                    edges.push_back({spec.edges[i][0] + 1, spec.edges[i][1] + 1,
                                     spec.edge_weights.empty() ? 1.0 : spec.edge_weights[i]});
                params["edges"] = edges;
            } else {
                params["random_degree"] = spec.random_degree;
            }
            break;
        case InstanceKind::ConcaveCard:
            params["phi"] = spec.phi;
            break;
        case InstanceKind::Coverage:
            if (!spec.sets.empty()) {
                ordered_json sets = ordered_json::array();
                for (const auto& s : spec.sets) {
                    ordered_json items = ordered_json::array();
                    for (int it : s) items.push_back(it + 1);
                    sets.push_back(items);
                }
                params["sets"] = sets;
            } else {
                params["items"] = spec.items;
                params["set_size"] = spec.set_size;
            }
            params["random_costs"] = spec.random_costs;
            break;
        case InstanceKind::Table:
            params["values"] = spec.values;
            break;
    }
    j["params"] = params;
    return j.dump();
}

InstanceSpec instance_spec_from_edge_list(const std::string& text) {
    InstanceSpec spec;
    spec.kind = InstanceKind::Cut;
    std::istringstream in(text);
    std::string line;
    int max_vertex = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int u, v;
        double w = 1.0;
        if (!(ls >> u >> v)) continue;  // blank or comment line
        ls >> w;
        spec.edges.push_back({u - 1, v - 1});
        spec.edge_weights.push_back(w);
        max_vertex = std::max({max_vertex, u, v});
    }
    if (spec.edges.empty()) throw std::invalid_argument("edge list contains no edges");
    spec.n = max_vertex;
    return spec;
}

InstanceSpec instance_spec_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return instance_spec_from_json(text);
    return instance_spec_from_edge_list(text);
}

CostModelConfig cost_config_from_json(const std::string& text) {
    json j = json::parse(text);
    CostModelConfig cfg;
    cfg.c_grover = j.value("c_grover", cfg.c_grover);
    cfg.c_max = j.value("c_max", cfg.c_max);
    cfg.c_ae = j.value("c_ae", cfg.c_ae);
    cfg.c_prep = j.value("c_prep", cfg.c_prep);
    cfg.c_abort = j.value("c_abort", cfg.c_abort);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.inject_ae_noise = j.value("inject_ae_noise", cfg.inject_ae_noise);
    cfg.inject_search_failure = j.value("inject_search_failure", cfg.inject_search_failure);
    cfg.validate();
    return cfg;
}

std::string cost_config_to_json(const CostModelConfig& cfg) {
    ordered_json j;
    j["c_grover"] = cfg.c_grover;
    j["c_max"] = cfg.c_max;
    j["c_ae"] = cfg.c_ae;
    j["c_prep"] = cfg.c_prep;
    j["c_abort"] = cfg.c_abort;
    j["delta"] = cfg.delta;
    j["inject_ae_noise"] = cfg.inject_ae_noise;
    j["inject_search_failure"] = cfg.inject_search_failure;
    return j.dump();
}

DescentConfig descent_config_from_json(const std::string& text, int n) {
    json j = json::parse(text);
    double eps = j.value("epsilon", 0.2);
    std::string mode = j.value("mode", "classical");
    DescentConfig cfg;
    if (mode == "classical") {
        cfg = preset_classical(n, eps);
    } else if (mode == "quantum") {
        cfg = preset_quantum_full(n, eps);
    } else if (mode == "hybrid") {
        cfg = preset_hybrid(n, eps);
    } else if (mode == "auto") {
        cfg = preset_quantum(n, eps);
    } else {
        throw std::invalid_argument("unknown mode: " + mode);
    }
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("cost_model"))
        cfg.cost = cost_config_from_json(j["cost_model"].dump());
    if (j.contains("exact_quantum") && j["exact_quantum"].get<bool>()) {
        cfg.cost.inject_ae_noise = false;
        cfg.cost.inject_search_failure = false;
    }
    if (j.contains("overrides")) {
        const json& o = j["overrides"];
        if (o.contains("T")) cfg.T = o["T"].get<int>();
        if (o.contains("N")) cfg.N = o["N"].get<long long>();
        if (o.contains("eta")) cfg.eta = o["eta"].get<double>();
        if (o.contains("eps0")) cfg.eps0 = o["eps0"].get<double>();
        if (o.contains("eps1")) cfg.eps1 = o["eps1"].get<double>();
        if (o.contains("delta")) cfg.delta = o["delta"].get<double>();
    }
    cfg.validate();
    return cfg;
}

std::string report_to_json(const DescentReport& rep) {
    ordered_json j;
    j["label"] = rep.label;
    j["n"] = rep.n;
    ordered_json cfg;
    cfg["mode"] = mode_name(rep.config.mode);
    cfg["epsilon"] = rep.config.epsilon;
    cfg["T"] = rep.config.T;
    cfg["N"] = rep.config.N;
    cfg["eta"] = rep.config.effective_eta(rep.n);
    cfg["eps0"] = rep.config.eps0;
    cfg["eps1"] = rep.config.eps1;
    cfg["delta"] = rep.config.delta;
    cfg["seed"] = rep.config.seed;
    j["config"] = cfg;
    double l1 = 0.0, linf = 0.0;
    for (double v : rep.x_bar) {
        l1 += v;
        linf = std::max(linf, v);
    }
    ordered_json xb;
    xb["l1"] = l1;
    xb["linf"] = linf;
    xb["mean"] = rep.x_bar.empty() ? 0.0 : l1 / double(rep.x_bar.size());
    j["x_bar_summary"] = xb;
    ordered_json sbar = ordered_json::array();
    for (int e : rep.s_bar) sbar.push_back(e + 1);
    j["S_bar"] = sbar;
    j["F_S_bar"] = rep.f_s_bar;
    j["f_x_bar_rounded"] = rep.f_x_bar_rounded;
    j["best_seen_value"] = rep.best_seen_value;
    j["bound"] = rep.bound;
    j["ledger"] = json::parse(rep.ledger.to_json());
    ordered_json st;
    st["batches"] = rep.stats.batches;
    st["setup_failures"] = rep.stats.setup_failures;
    st["max_estimate_l2"] = rep.stats.max_estimate_l2;
    st["max_gtilde_sparsity"] = rep.stats.max_gtilde_sparsity;
    st["max_e_support"] = rep.stats.max_e_sparsity;
    st["norm_violations"] = rep.stats.norm_violations;
    j["stats"] = st;
    return j.dump();
}

}  // namespace submod
