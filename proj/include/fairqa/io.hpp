#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairqa/driver.hpp"
#include "fairqa/error.hpp"
#include "fairqa/model.hpp"
#include "fairqa/perturb.hpp"
#include "fairqa/sqa.hpp"
#include "fairqa/transforms.hpp"

namespace fairqa::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(where, "missing field '" + key + "'");
    return *it;
}

inline int as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) schema_error(where, "expected an integer");
    return j.get<int>();
}

inline double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) schema_error(where, "expected a number");
    return j.get<double>();
}

inline std::vector<int> as_int_list(const json& j, const std::string& where) {
    if (!j.is_array()) schema_error(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_int(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

inline int as_index_key(const std::string& key, const std::string& where) {
    std::size_t used = 0;
    int v = -1;
    try {
        v = std::stoi(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || v < 0) schema_error(where, "key '" + key + "' is not a non-negative integer");
    return v;
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace detail

// ---- coefficients -----------------------------------------------------------

/// Accepts a number, "$name", "-$name" or "<number>*$name".
inline LinearCoeff coeff_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return LinearCoeff(j.get<double>());
    if (!j.is_string()) detail::schema_error(where, "coefficient must be a number or a \"$name\" reference");
    std::string s = j.get<std::string>();
    double scale = 1.0;
    if (auto star = s.find('*'); star != std::string::npos) {
        try {
            std::size_t used = 0;
            scale = std::stod(s.substr(0, star), &used);
            if (used != star) throw std::invalid_argument("");
        } catch (const std::exception&) {
            detail::schema_error(where, "bad scale in coefficient '" + s + "'");
        }
        s = s.substr(star + 1);
    } else if (!s.empty() && s[0] == '-') {
        scale = -1.0;
        s = s.substr(1);
    }
    const auto ident = [](char c, bool first) {
        return c == '_' || std::isalpha(static_cast<unsigned char>(c)) || (!first && std::isdigit(static_cast<unsigned char>(c)));
    };
    bool ok = s.size() >= 2 && s[0] == '$' && ident(s[1], true);
    for (std::size_t i = 2; ok && i < s.size(); ++i) ok = ident(s[i], false);
    if (!ok) detail::schema_error(where, "bad parameter reference '" + j.get<std::string>() + "'");
    return LinearCoeff::parameter(s.substr(1), scale);
}

inline json coeff_to_json(const LinearCoeff& c) {
    if (c.is_constant()) return c.constant;
    if (c.params.size() != 1 || c.constant != 0.0)
        throw ConfigError("coefficient mixing constants and several parameters cannot be written");
    const auto& [name, scale] = *c.params.begin();
    if (scale == 1.0) return "$" + name;
    if (scale == -1.0) return "-$" + name;
    return detail::format_number(scale) + "*$" + name;
}

// ---- model ------------------------------------------------------------------

inline IsingModel model_from_json(const json& j) {
    const int n = detail::as_int(detail::field(j, "num_spins", "model"), "model.num_spins");
    const json& terms = detail::field(j, "terms", "model");
    if (!terms.is_array()) detail::schema_error("model.terms", "expected an array");
    std::vector<Term> out;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string where = "model.terms[" + std::to_string(k) + "]";
        out.push_back({detail::as_int_list(detail::field(terms[k], "spins", where), where + ".spins"),
                       coeff_from_json(detail::field(terms[k], "coeff", where), where + ".coeff")});
    }
    LinearCoeff offset;
    if (auto it = j.find("offset"); it != j.end()) offset = coeff_from_json(*it, "model.offset");
    ParamMap params;
    if (auto it = j.find("params"); it != j.end()) {
        if (!it->is_object()) detail::schema_error("model.params", "expected an object");
        for (const auto& [name, v] : it->items()) params[name] = detail::as_number(v, "model.params." + name);
    }
    try {
        return IsingModel(n, std::move(out), std::move(offset), std::move(params));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

inline json model_to_json(const IsingModel& m) {
    json terms = json::array();
    for (const auto& t : m.terms()) terms.push_back({{"spins", t.spins}, {"coeff", coeff_to_json(t.coeff)}});
    json j = {{"num_spins", m.num_spins()}, {"terms", terms}, {"offset", coeff_to_json(m.offset())}};
    if (!m.params().empty()) j["params"] = m.params();
    return j;
}

// ---- driver -----------------------------------------------------------------

inline DriverSpec driver_from_json(const json& j) {
    const int n = detail::as_int(detail::field(j, "num_spins", "driver"), "driver.num_spins");
    const json& xs = detail::field(j, "xterms", "driver");
    if (!xs.is_array()) detail::schema_error("driver.xterms", "expected an array");
    std::vector<XTerm> terms;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const std::string where = "driver.xterms[" + std::to_string(k) + "]";
        std::uint64_t mask = 0;
        for (int i : detail::as_int_list(detail::field(xs[k], "spins", where), where + ".spins")) {
            if (i < 0 || i >= n || i >= kMaxSpins) detail::schema_error(where + ".spins", "spin index out of range");
            mask |= bit(i);
        }
        terms.push_back({mask, detail::as_number(detail::field(xs[k], "coeff", where), where + ".coeff")});
    }
    return DriverSpec(n, terms);
}

inline json driver_to_json(const DriverSpec& V) {
    json xs = json::array();
    for (const auto& t : V.terms()) {
        std::vector<int> spins;
        for (int i = 0; i < V.num_spins(); ++i)
            if (t.mask >> i & 1U) spins.push_back(i);
        xs.push_back({{"spins", spins}, {"coeff", t.coeff}});
    }
    return {{"num_spins", V.num_spins()}, {"xterms", xs}};
}

// ---- embedding --------------------------------------------------------------

inline Embedding embedding_from_json(const json& j) {
    Embedding e;
    const json& chains = detail::field(j, "chains", "embedding");
    if (!chains.is_object()) detail::schema_error("embedding.chains", "expected an object");
    const std::size_t n = chains.size();
    e.chains.resize(n);
    e.chain_edges.resize(n);
    for (const auto& [key, v] : chains.items()) {
        const int i = detail::as_index_key(key, "embedding.chains");
        if (static_cast<std::size_t>(i) >= n) detail::schema_error("embedding.chains", "logical indices must be 0..n-1");
        e.chains[i] = detail::as_int_list(v, "embedding.chains." + key);
    }
    if (auto it = j.find("chain_edges"); it != j.end()) {
        for (const auto& [key, v] : it->items()) {
            const int i = detail::as_index_key(key, "embedding.chain_edges");
            if (static_cast<std::size_t>(i) >= n) detail::schema_error("embedding.chain_edges", "unknown chain " + key);
            if (!v.is_array()) detail::schema_error("embedding.chain_edges." + key, "expected an array of pairs");
            for (const auto& edge : v) {
                const auto ab = detail::as_int_list(edge, "embedding.chain_edges." + key);
                if (ab.size() != 2) detail::schema_error("embedding.chain_edges." + key, "edges must have two ends");
                e.chain_edges[i].push_back({ab[0], ab[1]});
            }
        }
    }
    const json& assignment = detail::field(j, "assignment", "embedding");
    if (!assignment.is_object()) detail::schema_error("embedding.assignment", "expected an object");
    for (const auto& [key, v] : assignment.items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) detail::schema_error("embedding.assignment", "key '" + key + "' must be \"i,j\"");
        int a = detail::as_index_key(key.substr(0, comma), "embedding.assignment");
        int b = detail::as_index_key(key.substr(comma + 1), "embedding.assignment");
        auto ab = detail::as_int_list(v, "embedding.assignment." + key);
        if (ab.size() != 2) detail::schema_error("embedding.assignment." + key, "expected [a, b]");
        if (a > b) {
            std::swap(a, b);
            std::swap(ab[0], ab[1]);
        }
        e.assignment[{a, b}] = {ab[0], ab[1]};
    }
    if (auto it = j.find("field_split"); it != j.end()) {
        e.field_split.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            e.field_split[i].assign(e.chains[i].size(), 0.0);
            if (!e.chains[i].empty()) e.field_split[i][0] = 1.0;
        }
        for (const auto& [key, v] : it->items()) {
            const int i = detail::as_index_key(key, "embedding.field_split");
            if (static_cast<std::size_t>(i) >= n) detail::schema_error("embedding.field_split", "unknown chain " + key);
            if (!v.is_array()) detail::schema_error("embedding.field_split." + key, "expected an array");
            std::vector<double> w;
            for (const auto& x : v) w.push_back(detail::as_number(x, "embedding.field_split." + key));
            e.field_split[i] = std::move(w);
        }
    }
    return e;
}

inline json embedding_to_json(const Embedding& e) {
    json chains = json::object(), edges = json::object(), assign = json::object();
    for (std::size_t i = 0; i < e.chains.size(); ++i) {
        chains[std::to_string(i)] = e.chains[i];
        json list = json::array();
        for (auto [a, b] : e.chain_edges[i]) list.push_back({a, b});
        edges[std::to_string(i)] = list;
    }
    for (const auto& [logical, physical] : e.assignment)
        assign[std::to_string(logical.first) + "," + std::to_string(logical.second)] = {physical.first, physical.second};
    json j = {{"chains", chains}, {"chain_edges", edges}, {"assignment", assign}};
    if (!e.field_split.empty()) {
        json fs = json::object();
        for (std::size_t i = 0; i < e.field_split.size(); ++i) fs[std::to_string(i)] = e.field_split[i];
        j["field_split"] = fs;
    }
    return j;
}

// ---- spin lists, SQA tallies ------------------------------------------------

/// Either ["0101", ...] or {"states": [...]} with spin-string entries.
inline std::vector<SpinConfig> states_from_json(const json& j, int num_spins) {
    const json& list = j.is_object() ? detail::field(j, "states", "targets") : j;
    if (!list.is_array()) detail::schema_error("targets", "expected an array of spin strings");
    std::vector<SpinConfig> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        if (!list[k].is_string()) detail::schema_error("targets[" + std::to_string(k) + "]", "expected a spin string");
        out.push_back(parse_spins(list[k].get<std::string>(), num_spins));
    }
    return out;
}

inline json states_to_json(const std::vector<SpinConfig>& states, int num_spins) {
    json list = json::array();
    for (auto s : states) list.push_back(to_string(s, num_spins));
    return {{"states", list}};
}

inline json sqa_config_to_json(const sqa::SqaConfig& c) {
    return {{"trotter_slices", c.trotter_slices}, {"beta", c.beta},     {"gamma_start", c.gamma_start},
            {"gamma_end", c.gamma_end},           {"sweeps", c.sweeps}, {"samples", c.samples},
            {"runs", c.runs},                     {"seed", c.seed},     {"max_inter_slice_coupling", sqa::kMaxInterSliceCoupling},
            {"readout_slice", 0}};
}

inline json tally_to_json(const sqa::SampleTally& t, int num_spins, const sqa::SqaConfig& cfg) {
    json states = json::array(), mean = json::array(), se = json::array();
    for (std::size_t i = 0; i < t.targets.size(); ++i) {
        states.push_back(to_string(t.targets[i], num_spins));
        mean.push_back(t.mean_frequency(i));
        se.push_back(t.standard_error(i));
    }
    return {{"targets", states}, {"samples", t.samples}, {"runs", t.runs()},     {"counts", t.counts},
            {"out_of_set", t.out_of_set}, {"mean_frequency", mean}, {"standard_error", se},
            {"total_hits", t.total_hits()}, {"config", sqa_config_to_json(cfg)}};
}

// ---- files ------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

inline IsingModel read_model(const std::string& path) {
    try {
        return model_from_json(read_json_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---- DOT --------------------------------------------------------------------

/// Graphviz text for a solution graph. Node labels are bit strings, self
/// loops become the node attribute `self`, edges carry `w` and `hd`.
inline std::string export_dot(const SolutionGraph& g) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream os;
    const int n = g.manifold.num_spins;
    os << "graph solution_graph {\n";
    os << "  graph [order=" << to_string(g.order) << "];\n";
    os << "  node [style=filled, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const int c = g.components.label[i];
        os << "  n" << i << " [label=\"" << to_string(g.manifold.states[i], n) << "\", component=" << c
           << ", self=" << detail::format_number(g.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)))
           << ", fillcolor=\"" << palette[c % 10] << "\"];\n";
    }
    for (Eigen::Index i = 0; i < g.A.rows(); ++i)
        for (Eigen::Index j = i + 1; j < g.A.cols(); ++j)
            if (g.A(i, j) != 0.0)
                os << "  n" << i << " -- n" << j << " [label=\"" << g.hamming(i, j) << "\", hd=" << g.hamming(i, j)
                   << ", w=" << detail::format_number(g.A(i, j)) << "];\n";
    os << "}\n";
    return os.str();
}

} // namespace fairqa::io
