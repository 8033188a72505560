#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/groundset.hpp"
#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"

namespace fairqa {

using Edge = std::pair<int, int>;

/// Minor embedding of a logical model into physical qubits.
struct Embedding {
    std::vector<std::vector<int>> chains;      ///< logical i -> physical qubits
    std::vector<std::vector<Edge>> chain_edges; ///< per chain, edges spanning it
    std::map<Edge, Edge> assignment;           ///< logical (i<j) -> physical (a in chain i, b in chain j)
    std::vector<std::vector<double>> field_split; ///< per chain, weights summing to 1; empty: all on first qubit

    int num_logical() const noexcept { return static_cast<int>(chains.size()); }

    int num_physical() const noexcept {
        int p = 0;
        for (const auto& c : chains) p += static_cast<int>(c.size());
        return p;
    }

    int num_chain_edges() const noexcept {
        int e = 0;
        for (const auto& c : chain_edges) e += static_cast<int>(c.size());
        return e;
    }

    /// Every logical spin on its own qubit with the same index.
    static Embedding identity(const IsingModel& model) {
        Embedding e;
        const int n = model.num_spins();
        for (int i = 0; i < n; ++i) e.chains.push_back({i});
        e.chain_edges.assign(static_cast<std::size_t>(n), {});
        for (const auto& t : model.terms())
            if (t.spins.size() == 2) e.assignment[{t.spins[0], t.spins[1]}] = {t.spins[0], t.spins[1]};
        return e;
    }

    /// Structural checks against `model`; throws EmbeddingError.
    void validate(const IsingModel& model) const {
        const int n = model.num_spins();
        if (num_logical() != n)
            throw EmbeddingError("embedding has " + std::to_string(num_logical()) + " chains for " +
                                 std::to_string(n) + " logical spins");
        if (chain_edges.size() != chains.size()) throw EmbeddingError("chain_edges must list every chain");
        const int p = num_physical();
        if (p > kMaxSpins) throw EmbeddingError("more than 64 physical qubits");
        std::vector<int> owner(static_cast<std::size_t>(p), -1);
        for (int i = 0; i < n; ++i) {
            if (chains[i].empty()) throw EmbeddingError("chain " + std::to_string(i) + " is empty");
            for (int q : chains[i]) {
                if (q < 0 || q >= p)
                    throw EmbeddingError("physical qubit " + std::to_string(q) + " outside 0.." + std::to_string(p - 1));
                if (owner[q] >= 0) throw EmbeddingError("physical qubit " + std::to_string(q) + " in two chains");
                owner[q] = i;
            }
        }
        for (int i = 0; i < n; ++i) {
            // union-find over the chain's own edges
            std::map<int, int> parent;
            for (int q : chains[i]) parent[q] = q;
            auto find = [&](int q) {
                while (parent[q] != q) q = parent[q] = parent[parent[q]];
                return q;
            };
            for (auto [a, b] : chain_edges[i]) {
                if (a < 0 || b < 0 || a >= p || b >= p || owner[a] != i || owner[b] != i || a == b)
                    throw EmbeddingError("chain edge (" + std::to_string(a) + "," + std::to_string(b) +
                                         ") does not join two qubits of chain " + std::to_string(i));
                parent[find(a)] = find(b);
            }
            const int root = find(chains[i].front());
            for (int q : chains[i])
                if (find(q) != root) throw EmbeddingError("chain " + std::to_string(i) + " is not connected");
        }
        for (const auto& t : model.terms()) {
            if (t.spins.size() > 2) throw EmbeddingError("only models up to quadratic order can be embedded");
            if (t.spins.size() != 2) continue;
            auto it = assignment.find({t.spins[0], t.spins[1]});
            if (it == assignment.end())
                throw EmbeddingError("no physical edge assigned to logical coupling (" + std::to_string(t.spins[0]) +
                                     "," + std::to_string(t.spins[1]) + ")");
            auto [a, b] = it->second;
            if (a < 0 || b < 0 || a >= p || b >= p || owner[a] != t.spins[0] || owner[b] != t.spins[1])
                throw EmbeddingError("assigned edge for (" + std::to_string(t.spins[0]) + "," +
                                     std::to_string(t.spins[1]) + ") does not join the two chains");
        }
        if (!field_split.empty()) {
            if (field_split.size() != chains.size()) throw EmbeddingError("field_split must cover every chain");
            for (int i = 0; i < n; ++i) {
                if (field_split[i].size() != chains[i].size())
                    throw EmbeddingError("field_split for chain " + std::to_string(i) + " has the wrong length");
                double s = 0.0;
                for (double w : field_split[i]) s += w;
                if (std::abs(s - 1.0) > 1e-12)
                    throw EmbeddingError("field_split for chain " + std::to_string(i) + " does not sum to 1");
            }
        }
    }

    double split_weight(int logical, std::size_t k) const {
        if (field_split.empty()) return k == 0 ? 1.0 : 0.0;
        return field_split[static_cast<std::size_t>(logical)][k];
    }
};

namespace detail {

inline IsingModel embed_with(const IsingModel& model, const Embedding& emb, const LinearCoeff& chain_term,
                             ParamMap params) {
    emb.validate(model);
    std::vector<Term> out;
    for (const auto& t : model.terms()) {
        if (t.spins.size() == 1) {
            const int i = t.spins[0];
            const auto& chain = emb.chains[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < chain.size(); ++k) {
                const double w = emb.split_weight(i, k);
                if (w != 0.0) out.push_back({{chain[k]}, t.coeff.scaled(w)});
            }
        } else {
            auto [a, b] = emb.assignment.at({t.spins[0], t.spins[1]});
            out.push_back({{a, b}, t.coeff});
        }
    }
    for (const auto& edges : emb.chain_edges)
        for (auto [a, b] : edges) out.push_back({{a, b}, chain_term});
    return IsingModel(emb.num_physical(), std::move(out), model.offset(), std::move(params));
}

} // namespace detail

/// Physical model: fields split across chains, couplings on their assigned
/// edges, and -J_F s_a s_b on every chain edge.
inline IsingModel embed(const IsingModel& model, const Embedding& emb, double chain_strength) {
    if (!(chain_strength > 0.0)) throw ConfigError("chain strength must be positive");
    return detail::embed_with(model, emb, LinearCoeff(-chain_strength), model.params());
}

/// Same as embed() with the chain strength left as parameter `name`.
inline IsingModel embed_template(const IsingModel& model, const Embedding& emb, const std::string& name = "J_F",
                                 std::optional<double> default_value = std::nullopt) {
    ParamMap params = model.params();
    if (default_value) params[name] = *default_value;
    return detail::embed_with(model, emb, LinearCoeff::parameter(name, -1.0), std::move(params));
}

/// Physical image of a logical configuration with every chain aligned.
inline SpinConfig chain_extend(SpinConfig logical, const Embedding& emb) {
    SpinConfig out;
    for (int i = 0; i < emb.num_logical(); ++i)
        if (logical.up(i))
            for (int q : emb.chains[static_cast<std::size_t>(i)]) out.bits |= bit(q);
    return out;
}

/// Logical configuration if every chain is aligned, otherwise nullopt.
inline std::optional<SpinConfig> chain_decode(SpinConfig physical, const Embedding& emb) {
    SpinConfig out;
    for (int i = 0; i < emb.num_logical(); ++i) {
        const auto& chain = emb.chains[static_cast<std::size_t>(i)];
        const bool first = physical.up(chain.front());
        for (int q : chain)
            if (physical.up(q) != first) return std::nullopt;
        if (first) out.bits |= bit(i);
    }
    return out;
}

/// Manifold indices whose state has at least one broken chain.
inline std::vector<int> broken_chain_states(const GroundManifold& m, const Embedding& emb) {
    std::vector<int> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!chain_decode(m.states[i], emb)) out.push_back(static_cast<int>(i));
    return out;
}

/// Local-field / interaction exchange around spin k.
///
/// For every spin j coupled to k the field term on j and the coupling (k,j)
/// trade coefficients. When no other coupling touches j this is the change of
/// variables s_j -> s_j s_k, so the energy spectrum is preserved while the
/// single-flip connectivity between ground states changes. Terms that become
/// zero are kept so that applying the transform twice gives back the input.
inline IsingModel eltip(const IsingModel& model, int k) {
    const int n = model.num_spins();
    if (k < 0 || k >= n) throw ConfigError("spin " + std::to_string(k) + " out of range");
    if (model.max_order() > 2) throw UnsupportedTransformError("exchange is defined for at most quadratic models");
    const auto nb = model.neighbours(k);
    if (nb.empty()) throw UnsupportedTransformError("spin " + std::to_string(k) + " has no couplings to exchange");

    std::map<std::vector<int>, LinearCoeff> terms;
    for (const auto& t : model.terms()) terms[t.spins] = t.coeff;
    for (int j : nb) {
        const std::vector<int> field{j};
        const std::vector<int> pair{std::min(j, k), std::max(j, k)};
        const LinearCoeff h = terms.count(field) ? terms[field] : LinearCoeff{};
        terms[field] = terms[pair];
        terms[pair] = h;
    }
    std::vector<Term> out;
    for (auto& [spins, c] : terms) out.push_back({spins, std::move(c)});
    return IsingModel(n, std::move(out), model.offset(), model.params());
}

} // namespace fairqa
