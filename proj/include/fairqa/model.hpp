#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/spin.hpp"

namespace fairqa {

using ParamMap = std::map<std::string, double>;

/// Coefficient that is affine in the model parameters:
/// constant + sum over names of scale * value(name).
struct LinearCoeff {
    double constant = 0.0;
    std::map<std::string, double> params;

    LinearCoeff() = default;
    LinearCoeff(double c) : constant(c) {} // NOLINT(google-explicit-constructor)

    static LinearCoeff parameter(std::string name, double scale = 1.0) {
        LinearCoeff c;
        c.params.emplace(std::move(name), scale);
        return c;
    }

    bool is_constant() const noexcept { return params.empty(); }

    LinearCoeff& operator+=(const LinearCoeff& other) {
        constant += other.constant;
        for (const auto& [name, scale] : other.params) params[name] += scale;
        return *this;
    }

    LinearCoeff scaled(double s) const {
        LinearCoeff out = *this;
        out.constant *= s;
        for (auto& [name, scale] : out.params) scale *= s;
        return out;
    }

    /// Throws ConfigError naming the first parameter missing from `bindings`.
    double evaluate(const ParamMap& bindings) const {
        double v = constant;
        for (const auto& [name, scale] : params) {
            auto it = bindings.find(name);
            if (it == bindings.end()) throw ConfigError("unresolved parameter '" + name + "'");
            v += scale * it->second;
        }
        if (!std::isfinite(v)) throw ConfigError("coefficient evaluates to a non-finite value");
        return v;
    }

    friend bool operator==(const LinearCoeff&, const LinearCoeff&) = default;
};

/// coeff * prod_{i in spins} sigma_i
struct Term {
    std::vector<int> spins;
    LinearCoeff coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Diagonal target Hamiltonian H0 as a signed polynomial over +-1 spins.
///
/// Coefficients are stored exactly as they appear in H0; no sign convention
/// is imposed. Terms sharing a support are merged, an empty support folds
/// into the offset. Immutable once built.
class IsingModel {
public:
    IsingModel() = default;

    IsingModel(int num_spins, std::vector<Term> terms, LinearCoeff offset = {}, ParamMap params = {})
        : n_(num_spins), offset_(std::move(offset)), params_(std::move(params)) {
        if (n_ <= 0 || n_ > kMaxSpins)
            throw ConfigError("num_spins must be in [1, 64], got " + std::to_string(n_));
        std::map<std::vector<int>, LinearCoeff> merged;
        for (auto& t : terms) {
            std::sort(t.spins.begin(), t.spins.end());
            for (std::size_t i = 0; i < t.spins.size(); ++i) {
                if (t.spins[i] < 0 || t.spins[i] >= n_)
                    throw ConfigError("spin index " + std::to_string(t.spins[i]) + " out of range [0, " +
                                      std::to_string(n_) + ")");
                if (i > 0 && t.spins[i] == t.spins[i - 1])
                    throw ConfigError("duplicate spin index " + std::to_string(t.spins[i]) + " in term");
            }
            if (t.spins.empty()) {
                offset_ += t.coeff;
                continue;
            }
            merged[t.spins] += t.coeff;
        }
        terms_.reserve(merged.size());
        for (auto& [spins, c] : merged) terms_.push_back({spins, std::move(c)});
        std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            if (a.spins.size() != b.spins.size()) return a.spins.size() < b.spins.size();
            return a.spins < b.spins;
        });
        cache();
    }

    int num_spins() const noexcept { return n_; }
    std::span<const Term> terms() const noexcept { return terms_; }
    const LinearCoeff& offset() const noexcept { return offset_; }
    const ParamMap& params() const noexcept { return params_; }

    /// Every parameter referenced by a term or the offset.
    std::set<std::string> parameter_names() const {
        std::set<std::string> out;
        for (const auto& [name, s] : offset_.params) out.insert(name);
        for (const auto& t : terms_)
            for (const auto& [name, s] : t.coeff.params) out.insert(name);
        return out;
    }

    bool is_template() const { return !parameter_names().empty(); }

    /// True when every referenced parameter has a value in params().
    bool is_resolved() const noexcept { return resolved_; }

    int max_order() const noexcept {
        return terms_.empty() ? 0 : static_cast<int>(terms_.back().spins.size());
    }

    /// Parameter-free copy. `bindings` override the defaults stored in params().
    IsingModel substitute(const ParamMap& bindings) const {
        ParamMap all = params_;
        for (const auto& [k, v] : bindings) all[k] = v;
        std::vector<std::string> missing;
        for (const auto& name : parameter_names())
            if (!all.count(name)) missing.push_back(name);
        if (!missing.empty()) {
            std::string msg = "unbound parameters:";
            for (const auto& m : missing) msg += " " + m;
            throw ConfigError(msg);
        }
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({t.spins, t.coeff.evaluate(all)});
        return IsingModel(n_, std::move(out), offset_.evaluate(all));
    }

    double energy(SpinConfig s) const {
        require_resolved();
        double e = offset_value_;
        for (std::size_t k = 0; k < masks_.size(); ++k) {
            const bool negative = std::popcount(masks_[k] & ~s.bits) & 1;
            e += negative ? -values_[k] : values_[k];
        }
        return e;
    }

    /// Resolved value of the term over `spins` (sorted), 0 when absent.
    double coefficient(std::vector<int> spins) const {
        require_resolved();
        std::sort(spins.begin(), spins.end());
        if (spins.empty()) return offset_value_;
        for (std::size_t k = 0; k < terms_.size(); ++k)
            if (terms_[k].spins == spins) return values_[k];
        return 0.0;
    }

    bool has_term(std::vector<int> spins) const {
        std::sort(spins.begin(), spins.end());
        return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.spins == spins; });
    }

    /// Spins sharing a two-body term with k, ascending.
    std::vector<int> neighbours(int k) const {
        std::vector<int> out;
        for (const auto& t : terms_) {
            if (t.spins.size() != 2) continue;
            if (t.spins[0] == k) out.push_back(t.spins[1]);
            else if (t.spins[1] == k) out.push_back(t.spins[0]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    IsingModel scaled(double s) const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({t.spins, t.coeff.scaled(s)});
        return IsingModel(n_, std::move(out), offset_.scaled(s), params_);
    }

    /// Resolved per-term values in terms() order.
    std::span<const double> values() const {
        require_resolved();
        return values_;
    }
    std::span<const std::uint64_t> masks() const noexcept { return masks_; }
    double offset_value() const {
        require_resolved();
        return offset_value_;
    }

    friend bool operator==(const IsingModel& a, const IsingModel& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_ && a.offset_ == b.offset_ && a.params_ == b.params_;
    }

private:
    void cache() {
        masks_.clear();
        for (const auto& t : terms_) {
            std::uint64_t m = 0;
            for (int i : t.spins) m |= bit(i);
            masks_.push_back(m);
        }
        resolved_ = true;
        for (const auto& name : parameter_names())
            if (!params_.count(name)) resolved_ = false;
        values_.clear();
        if (resolved_) {
            for (const auto& t : terms_) values_.push_back(t.coeff.evaluate(params_));
            offset_value_ = offset_.evaluate(params_);
        }
    }

    void require_resolved() const {
        if (resolved_) return;
        for (const auto& name : parameter_names())
            if (!params_.count(name)) throw ConfigError("unresolved parameter '" + name + "'");
    }

    int n_ = 0;
    std::vector<Term> terms_;
    LinearCoeff offset_;
    ParamMap params_;

    std::vector<std::uint64_t> masks_;
    std::vector<double> values_;
    double offset_value_ = 0.0;
    bool resolved_ = true;
};

/// H0 = -sum_i h_i s_i - sum_{i<j} J_ij s_i s_j. Only the upper triangle of J is read.
inline IsingModel from_fields_couplings(const std::vector<double>& h,
                                        const std::vector<std::vector<double>>& J) {
    const int n = static_cast<int>(h.size());
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i)
        if (h[i] != 0.0) terms.push_back({{i}, -h[i]});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (J[i][j] != 0.0) terms.push_back({{i, j}, -J[i][j]});
    return IsingModel(n, std::move(terms));
}

/// Monomial over binary variables x_i in {0,1}.
struct BinaryMonomial {
    std::vector<int> vars;
    double coeff = 0.0;
};

/// Converts a polynomial in x_i = (1 + s_i)/2 to spin form. Because bit i of
/// a SpinConfig is set exactly when s_i = +1, the bit pattern of a spin state
/// doubles as the binary assignment x.
inline IsingModel from_binary_polynomial(int n, const std::vector<BinaryMonomial>& monomials, double offset = 0.0) {
    std::map<std::vector<int>, double> acc;
    double constant = offset;
    for (const auto& m : monomials) {
        std::vector<int> vars = m.vars;
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end()); // x^2 = x
        const std::size_t k = vars.size();
        const double w = m.coeff / static_cast<double>(std::uint64_t{1} << k);
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
            std::vector<int> support;
            for (std::size_t b = 0; b < k; ++b)
                if (sub >> b & 1U) support.push_back(vars[b]);
            if (support.empty()) constant += w;
            else acc[support] += w;
        }
    }
    std::vector<Term> terms;
    for (auto& [support, c] : acc)
        if (c != 0.0) terms.push_back({support, c});
    return IsingModel(n, std::move(terms), constant);
}

/// QUBO energy x^T Q x over the upper triangle (diagonal = linear terms).
inline IsingModel from_qubo(const std::vector<std::vector<double>>& Q, double offset = 0.0) {
    const int n = static_cast<int>(Q.size());
    std::vector<BinaryMonomial> mono;
    for (int i = 0; i < n; ++i) {
        if (Q[i][i] != 0.0) mono.push_back({{i}, Q[i][i]});
        for (int j = i + 1; j < n; ++j)
            if (Q[i][j] != 0.0) mono.push_back({{i, j}, Q[i][j]});
    }
    return from_binary_polynomial(n, mono, offset);
}

} // namespace fairqa
