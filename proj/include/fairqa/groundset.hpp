#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"

namespace fairqa {

enum class ManifoldSource { BruteForce, Provided };

/// Degenerate minimum-energy configurations of H0, ascending by bit value.
struct GroundManifold {
    int num_spins = 0;
    std::vector<SpinConfig> states;
    double e0 = 0.0;
    double tol = 0.0;
    ManifoldSource source = ManifoldSource::BruteForce;

    std::size_t size() const noexcept { return states.size(); }

    std::optional<std::size_t> index_of(SpinConfig s) const noexcept {
        auto it = std::lower_bound(states.begin(), states.end(), s);
        if (it == states.end() || *it != s) return std::nullopt;
        return static_cast<std::size_t>(it - states.begin());
    }

    bool contains(SpinConfig s) const noexcept { return index_of(s).has_value(); }
};

inline double default_tolerance(double e0) { return 1e-9 * std::max(1.0, std::abs(e0)); }

struct EnumerateOptions {
    std::optional<double> tol;     ///< absolute; default_tolerance(e0) when unset
    int max_spins = 28;
    std::size_t max_states = std::size_t{1} << 22;
    unsigned threads = 0;          ///< 0: hardware concurrency
};

namespace detail {

struct ScanResult {
    double min = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::uint64_t>> candidates;
};

// Gray-code sweep over the low `low_bits` with the high bits fixed to `high`.
// Each flip updates the energy through the terms touching the flipped spin.
inline ScanResult scan_block(const IsingModel& model, std::uint64_t high, int low_bits, double band,
                             std::size_t max_states) {
    const int n = model.num_spins();
    const auto masks = model.masks();
    const auto values = model.values();
    std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < masks.size(); ++t)
        for (int i = 0; i < n; ++i)
            if (masks[t] >> i & 1U) incident[static_cast<std::size_t>(i)].push_back(t);

    SpinConfig s{high << low_bits};
    std::vector<double> contrib(masks.size());
    double e = model.offset_value();
    for (std::size_t t = 0; t < masks.size(); ++t) {
        contrib[t] = (std::popcount(masks[t] & ~s.bits) & 1) ? -values[t] : values[t];
        e += contrib[t];
    }

    ScanResult r;
    auto consider = [&](double energy, std::uint64_t bits) {
        if (energy < r.min) {
            r.min = energy;
            std::erase_if(r.candidates, [&](const auto& c) { return c.first > r.min + band; });
        }
        if (energy <= r.min + band) {
            r.candidates.emplace_back(energy, bits);
            if (r.candidates.size() > max_states)
                throw CapacityError("ground manifold exceeds " + std::to_string(max_states) + " states");
        }
    };
    consider(e, s.bits);
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    for (std::uint64_t k = 1; k < count; ++k) {
        const int i = std::countr_zero(k);
        for (std::size_t t : incident[static_cast<std::size_t>(i)]) {
            e -= 2.0 * contrib[t];
            contrib[t] = -contrib[t];
        }
        s.bits ^= bit(i);
        consider(e, s.bits);
    }
    return r;
}

} // namespace detail

/// Exhaustive scan of all 2^N configurations.
///
/// The range is split into blocks of at most 2^20 states swept in Gray-code
/// order; energies of the surviving candidates are recomputed exactly before
/// the final tolerance cut, so the result does not depend on block layout or
/// worker count.
inline GroundManifold enumerate(const IsingModel& model, const EnumerateOptions& opt = {}) {
    const int n = model.num_spins();
    if (n > opt.max_spins)
        throw CapacityError("exhaustive enumeration is capped at " + std::to_string(opt.max_spins) +
                            " spins (model has " + std::to_string(n) +
                            "); build the manifold from known states instead");
    if (opt.tol && !(*opt.tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
    (void)model.values(); // throws on unresolved parameters

    double scale = std::abs(model.offset_value());
    for (double v : model.values()) scale += std::abs(v);
    const double band = opt.tol.value_or(0.0) + 1e-9 * std::max(1.0, scale) + 1e-12;

    const int low_bits = std::min(n, 20);
    const std::uint64_t blocks = std::uint64_t{1} << (n - low_bits);
    std::vector<detail::ScanResult> results(blocks);

    unsigned workers = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::uint64_t b = next++; b < blocks && !failed; b = next++) {
            try {
                results[b] = detail::scan_block(model, b, low_bits, band, opt.max_states);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::pair<double, SpinConfig>> exact;
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& r : results)
        for (const auto& c : r.candidates) {
            const SpinConfig s{c.second};
            const double e = model.energy(s);
            exact.emplace_back(e, s);
            e0 = std::min(e0, e);
        }
    const double tol = opt.tol.value_or(default_tolerance(e0));

    GroundManifold m;
    m.num_spins = n;
    m.e0 = e0;
    m.tol = tol;
    m.source = ManifoldSource::BruteForce;
    for (const auto& [e, s] : exact)
        if (e <= e0 + tol) m.states.push_back(s);
    std::sort(m.states.begin(), m.states.end());
    m.states.erase(std::unique(m.states.begin(), m.states.end()), m.states.end());
    return m;
}

/// Manifold from externally supplied states (too many spins for a scan).
inline GroundManifold from_states(const IsingModel& model, std::vector<SpinConfig> states,
                                  std::optional<double> tol = std::nullopt) {
    if (states.empty()) throw ConfigError("ground manifold needs at least one state");
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    const std::uint64_t outside = ~low_mask(model.num_spins());
    std::size_t lo = 0, hi = 0;
    std::vector<double> e(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].bits & outside) throw ConfigError("state has bits beyond num_spins");
        e[k] = model.energy(states[k]);
        if (e[k] < e[lo]) lo = k;
        if (e[k] > e[hi]) hi = k;
    }
    const double t = tol.value_or(default_tolerance(e[lo]));
    if (e[hi] - e[lo] > t)
        throw InconsistentManifoldError(
            "provided states are not degenerate: " + to_string(states[lo], model.num_spins()) + " has E=" +
            std::to_string(e[lo]) + ", " + to_string(states[hi], model.num_spins()) + " has E=" +
            std::to_string(e[hi]) + " (tol " + std::to_string(t) + ")");
    GroundManifold m;
    m.num_spins = model.num_spins();
    m.states = std::move(states);
    m.e0 = e[lo];
    m.tol = t;
    m.source = ManifoldSource::Provided;
    return m;
}

/// Energy of an intermediate state, or nullopt when s lies in the manifold.
inline std::optional<double> excited_energy(const IsingModel& model, SpinConfig s, const GroundManifold& m) {
    if (m.contains(s)) return std::nullopt;
    return model.energy(s);
}

} // namespace fairqa
