#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"

namespace fairqa::sqa {

/// Upper bound on the inter-slice coupling once Gamma is (nearly) zero.
inline constexpr double kMaxInterSliceCoupling = 20.0;

struct SqaConfig {
    int trotter_slices = 32;
    double beta = 10.0;
    double gamma_start = 3.0;
    double gamma_end = 0.01;
    int sweeps = 1000;
    int samples = 1000;
    int runs = 10;
    std::uint64_t seed = 42;
    unsigned threads = 0; ///< 0: hardware concurrency

    void validate() const {
        if (trotter_slices < 2) throw ConfigError("trotter_slices must be at least 2");
        if (!(beta > 0.0)) throw ConfigError("beta must be positive");
        if (!(gamma_start > gamma_end) || gamma_end < 0.0)
            throw ConfigError("gamma schedule must satisfy gamma_start > gamma_end >= 0");
        if (sweeps < 1 || samples < 1 || runs < 1) throw ConfigError("sweeps, samples and runs must be >= 1");
    }

    double gamma_at(int sweep) const {
        if (sweeps == 1) return gamma_start;
        return std::lerp(gamma_start, gamma_end, sweep / (sweeps - 1.0));
    }
};

/// J_perp = -1/2 ln tanh(beta Gamma / M), clamped to kMaxInterSliceCoupling.
inline double inter_slice_coupling(double beta, double gamma, int slices) {
    const double t = std::tanh(beta * gamma / slices);
    if (!(t > 0.0)) return kMaxInterSliceCoupling;
    return std::min(kMaxInterSliceCoupling, -0.5 * std::log(t));
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of sample `sample` in run `run`; independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run, std::uint64_t sample) {
    return splitmix64(splitmix64(splitmix64(seed) ^ run) ^ sample);
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Replicated spin system of the Suzuki-Trotter decomposition with
/// single-site Metropolis updates.
class PathIntegral {
public:
    PathIntegral(const IsingModel& model, int slices) : n_(model.num_spins()), slices_(static_cast<std::size_t>(slices)) {
        const auto masks = model.masks();
        const auto values = model.values();
        incident_.resize(static_cast<std::size_t>(n_));
        for (std::size_t t = 0; t < masks.size(); ++t)
            for (int i = 0; i < n_; ++i)
                if (masks[t] >> i & 1U) incident_[static_cast<std::size_t>(i)].push_back({masks[t], values[t]});
    }

    int num_spins() const noexcept { return n_; }
    int num_slices() const noexcept { return static_cast<int>(slices_.size()); }
    std::span<const std::uint64_t> slices() const noexcept { return slices_; }
    void set_slices(std::span<const std::uint64_t> s) { slices_.assign(s.begin(), s.end()); }

    void randomize(std::mt19937_64& rng) {
        for (auto& s : slices_) s = rng() & low_mask(n_);
    }

    /// Classical energy change of flipping spin i in configuration `bits`.
    double flip_delta(std::uint64_t bits, int i) const noexcept {
        double e = 0.0;
        for (const auto& t : incident_[static_cast<std::size_t>(i)])
            e += (std::popcount(t.mask & ~bits) & 1) ? -t.value : t.value;
        return -2.0 * e;
    }

    /// One Metropolis pass over every (slice, site) at fixed Gamma.
    void sweep(double beta, double gamma, std::mt19937_64& rng) {
        const int m = num_slices();
        const double scale = beta / m;
        const double jp = inter_slice_coupling(beta, gamma, m);
        for (int k = 0; k < m; ++k) {
            std::uint64_t& cur = slices_[static_cast<std::size_t>(k)];
            const std::uint64_t prev = slices_[static_cast<std::size_t>((k + m - 1) % m)];
            const std::uint64_t next = slices_[static_cast<std::size_t>((k + 1) % m)];
            for (int i = 0; i < n_; ++i) {
                const int s = (cur >> i & 1U) ? 1 : -1;
                const int sp = (prev >> i & 1U) ? 1 : -1;
                const int sn = (next >> i & 1U) ? 1 : -1;
                const double log_acc = -scale * flip_delta(cur, i) - 2.0 * jp * s * (sp + sn);
                if (log_acc >= 0.0 || uniform01(rng) < std::exp(log_acc)) cur ^= bit(i);
            }
        }
    }

private:
    struct Incident {
        std::uint64_t mask;
        double value;
    };
    int n_;
    std::vector<std::uint64_t> slices_;
    std::vector<std::vector<Incident>> incident_;
};

/// Log of the unnormalized Trotter weight of a full replica configuration.
inline double log_weight(const IsingModel& model, std::span<const std::uint64_t> slices, double beta, double gamma) {
    const int m = static_cast<int>(slices.size());
    const double jp = inter_slice_coupling(beta, gamma, m);
    double w = 0.0;
    for (int k = 0; k < m; ++k) {
        w -= beta / m * model.energy(SpinConfig{slices[static_cast<std::size_t>(k)]});
        const std::uint64_t diff = slices[static_cast<std::size_t>(k)] ^ slices[static_cast<std::size_t>((k + 1) % m)];
        w += jp * (model.num_spins() - 2 * std::popcount(diff));
    }
    return w;
}

/// One anneal along the linear Gamma schedule; returns slice 0.
inline SpinConfig anneal_once(const IsingModel& model, const SqaConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    PathIntegral pi(model, cfg.trotter_slices);
    pi.randomize(rng);
    for (int s = 0; s < cfg.sweeps; ++s) pi.sweep(cfg.beta, cfg.gamma_at(s), rng);
    return SpinConfig{pi.slices()[0]};
}

struct SampleTally {
    std::vector<SpinConfig> targets;
    std::vector<std::vector<long>> counts; ///< [run][target]
    std::vector<long> out_of_set;          ///< per run
    long samples = 0;

    int runs() const noexcept { return static_cast<int>(counts.size()); }

    double frequency(int run, std::size_t target) const {
        return static_cast<double>(counts[static_cast<std::size_t>(run)][target]) / static_cast<double>(samples);
    }

    double mean_frequency(std::size_t target) const {
        double s = 0.0;
        for (int r = 0; r < runs(); ++r) s += frequency(r, target);
        return s / runs();
    }

    /// Standard error of the mean across runs (0 with a single run).
    double standard_error(std::size_t target) const {
        if (runs() < 2) return 0.0;
        const double mu = mean_frequency(target);
        double v = 0.0;
        for (int r = 0; r < runs(); ++r) v += (frequency(r, target) - mu) * (frequency(r, target) - mu);
        return std::sqrt(v / (runs() - 1.0) / runs());
    }

    long total_hits() const {
        long h = 0;
        for (const auto& run : counts)
            for (long c : run) h += c;
        return h;
    }
};

/// runs x samples independent anneals, each with its own derived seed.
inline SampleTally run_experiment(const IsingModel& model, std::vector<SpinConfig> targets, const SqaConfig& cfg) {
    cfg.validate();
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    SampleTally tally;
    tally.targets = targets;
    tally.samples = cfg.samples;
    tally.counts.assign(static_cast<std::size_t>(cfg.runs), std::vector<long>(targets.size(), 0));
    tally.out_of_set.assign(static_cast<std::size_t>(cfg.runs), 0);

    const std::uint64_t total = static_cast<std::uint64_t>(cfg.runs) * static_cast<std::uint64_t>(cfg.samples);
    std::vector<std::uint64_t> results(total);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    auto work = [&] {
        try {
            for (std::uint64_t k = next++; k < total && !failed; k = next++) {
                const std::uint64_t run = k / static_cast<std::uint64_t>(cfg.samples);
                const std::uint64_t sample = k % static_cast<std::uint64_t>(cfg.samples);
                std::mt19937_64 rng(derive_seed(cfg.seed, run, sample));
                results[k] = anneal_once(model, cfg, rng).bits;
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    unsigned workers = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::uint64_t k = 0; k < total; ++k) {
        const auto run = static_cast<std::size_t>(k / static_cast<std::uint64_t>(cfg.samples));
        auto it = std::lower_bound(targets.begin(), targets.end(), SpinConfig{results[k]});
        if (it != targets.end() && it->bits == results[k])
            ++tally.counts[run][static_cast<std::size_t>(it - targets.begin())];
        else
            ++tally.out_of_set[run];
    }
    return tally;
}

} // namespace fairqa::sqa
