#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/spin.hpp"

namespace fairqa {

/// coeff * prod_{i in mask} sigma^x_i, coeff < 0.
struct XTerm {
    std::uint64_t mask = 0;
    double coeff = 0.0;

    friend bool operator==(const XTerm&, const XTerm&) = default;
};

/// Stoquastic driver V built from X-products. Terms are unique by mask and
/// sorted by mask value; positive coefficients are rejected.
class DriverSpec {
public:
    DriverSpec() = default;

    DriverSpec(int num_spins, const std::vector<XTerm>& xterms) : n_(num_spins) {
        if (n_ <= 0 || n_ > kMaxSpins)
            throw ConfigError("driver num_spins must be in [1, 64], got " + std::to_string(n_));
        std::map<std::uint64_t, double> merged;
        for (const auto& t : xterms) {
            if (t.mask == 0) throw ConfigError("driver term with empty flip mask");
            if ((t.mask & ~low_mask(n_)) != 0) throw ConfigError("driver term acts on spin >= num_spins");
            if (t.coeff > 0.0)
                throw ConfigError("driver coefficient " + std::to_string(t.coeff) +
                                  " is positive; only stoquastic drivers are supported");
            merged[t.mask] += t.coeff;
        }
        for (const auto& [mask, c] : merged)
            if (c < 0.0) terms_.push_back({mask, c});
    }

    /// V = -sum_i sigma^x_i
    static DriverSpec transverse_field(int n) {
        std::vector<XTerm> t;
        for (int i = 0; i < n; ++i) t.push_back({bit(i), -1.0});
        return DriverSpec(n, t);
    }

    /// Adds -sigma^x_i sigma^x_j for every listed pair.
    DriverSpec with_pairs(const std::vector<std::pair<int, int>>& pairs, double coeff = -1.0) const {
        std::vector<XTerm> t = terms_;
        for (auto [i, j] : pairs) t.push_back({bit(i) | bit(j), coeff});
        return DriverSpec(n_, t);
    }

    /// Transverse field plus every pair term, each with coefficient -1.
    static DriverSpec transverse_plus_pairs(int n) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        return transverse_field(n).with_pairs(pairs);
    }

    int num_spins() const noexcept { return n_; }
    std::span<const XTerm> terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// <s|V|t>. Zero on the diagonal because every mask is non-empty.
    double matrix_element(SpinConfig s, SpinConfig t) const noexcept {
        const std::uint64_t m = s.bits ^ t.bits;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const XTerm& x, std::uint64_t v) { return x.mask < v; });
        return (it != terms_.end() && it->mask == m) ? it->coeff : 0.0;
    }

    /// One application of V: (s xor mask, coeff) for each term, by mask.
    std::vector<std::pair<SpinConfig, double>> neighbors(SpinConfig s) const {
        std::vector<std::pair<SpinConfig, double>> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.emplace_back(s.flipped(t.mask), t.coeff);
        return out;
    }

    /// sum |coeff|; bounds the spectral norm of V.
    double one_norm() const noexcept {
        double s = 0.0;
        for (const auto& t : terms_) s -= t.coeff;
        return s;
    }

    friend bool operator==(const DriverSpec&, const DriverSpec&) = default;

private:
    int n_ = 0;
    std::vector<XTerm> terms_;
};

} // namespace fairqa
