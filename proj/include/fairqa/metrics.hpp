#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairqa/error.hpp"
#include "fairqa/perturb.hpp"

namespace fairqa {

struct PerronPair {
    double lambda = 0.0;
    Eigen::VectorXd vector; ///< nonnegative, unit 2-norm
    long iterations = 0;
};

struct PowerIterationOptions {
    double tol = 1e-12;
    long max_iterations = 1'000'000;
};

/// Top eigenpair of a symmetric nonnegative matrix by power iteration from
/// the all-ones vector. The iteration runs on B + cI with c = half the largest
/// row sum so that bipartite blocks (spectrum symmetric about 0) still
/// converge. Stops when both the Rayleigh quotient and the iterate change by
/// less than `tol`.
inline PerronPair perron(const Eigen::MatrixXd& B, const PowerIterationOptions& opt = {}) {
    const auto n = B.rows();
    PerronPair out;
    if (n == 0) return out;
    if (n == 1) {
        out.lambda = B(0, 0);
        out.vector = Eigen::VectorXd::Ones(1);
        return out;
    }
    const double shift = 0.5 * B.rowwise().sum().maxCoeff();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    if (B.isZero(0.0)) {
        out.vector = x;
        return out;
    }
    double lambda = x.dot(B * x);
    Eigen::VectorXd y(n);
    for (long it = 1; it <= opt.max_iterations; ++it) {
        y.noalias() = B * x;
        y += shift * x;
        y /= y.norm();
        const double next = y.dot(B * y);
        const double dv = (y - x).lpNorm<Eigen::Infinity>();
        const double dl = std::abs(next - lambda);
        x.swap(y);
        lambda = next;
        if (dl <= opt.tol * std::max(1.0, std::abs(lambda)) && dv <= opt.tol) {
            out.lambda = lambda;
            out.vector = x.cwiseMax(0.0);
            out.vector /= out.vector.norm();
            out.iterations = it;
            return out;
        }
    }
    const double residual = (B * x - lambda * x).norm();
    throw NumericalError("power iteration did not converge in " + std::to_string(opt.max_iterations) +
                         " iterations (residual " + std::to_string(residual) + ")");
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& A, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd B(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) B(a, b) = A(idx[a], idx[b]);
    return B;
}

struct ComponentSpectrum {
    std::vector<int> members;
    double lambda1 = 0.0;
    Eigen::VectorXd perron; ///< entries follow `members`
};

/// Per connected component: leading eigenvalue and Perron vector of the
/// diagonal block.
inline std::vector<ComponentSpectrum> component_spectra(const SolutionGraph& g,
                                                        const PowerIterationOptions& opt = {}) {
    std::vector<ComponentSpectrum> out;
    for (const auto& members : g.components.groups) {
        PerronPair p = perron(submatrix(g.A, members), opt);
        out.push_back({members, p.lambda, std::move(p.vector)});
    }
    return out;
}

struct StateMetrics {
    SpinConfig state;
    int component = 0;
    double degree = 0.0;       ///< row sum of A
    double eigen = 0.0;        ///< Perron entry, max-norm 1 within the component
    double eigen_unit = 0.0;   ///< Perron entry, unit 2-norm within the component
    std::optional<double> ef;  ///< second order only
    std::optional<double> ref; ///< second order only
    double p = 0.0;            ///< predicted sampling probability
};

struct ComponentMetrics {
    std::vector<int> members;
    double lambda1 = 0.0;
    bool surviving = false;
};

struct FairnessReport {
    Order order = Order::First;
    int num_spins = 0;
    double e0 = 0.0;
    double tol = 0.0;
    std::vector<StateMetrics> states;
    std::vector<ComponentMetrics> components;
    double tv_uniform = 0.0;
    double cv_centrality = 0.0;
    double survivor_rel_tol = 1e-9;
    std::string tie_rule = "equal-split";

    std::vector<double> probabilities() const {
        std::vector<double> p;
        for (const auto& s : states) p.push_back(s.p);
        return p;
    }
};

struct FlatnessEntry {
    double ef = 0.0;
    double ref = 0.0;
};

/// EF_i = off-diagonal row sum of A; REF_i = EF_i / sum_{j != i} EF_j.
/// nullopt for first-order graphs.
inline std::optional<std::vector<FlatnessEntry>> energy_flatness(const SolutionGraph& g) {
    if (g.order != Order::Second) return std::nullopt;
    const auto n = g.A.rows();
    std::vector<FlatnessEntry> out(static_cast<std::size_t>(n));
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i].ef = g.A.row(i).sum() - g.A(i, i);
        total += out[i].ef;
    }
    for (auto& e : out) {
        const double rest = total - e.ef;
        e.ref = rest > 0.0 ? e.ef / rest : 0.0;
    }
    return out;
}

struct FairnessScalars {
    double tv_uniform = 0.0;
    double cv_centrality = 0.0;
};

/// Total variation of p from uniform, and stdev/mean (population) of the
/// surviving states' centralities.
inline FairnessScalars fairness_scalars(std::span<const double> p, std::span<const double> surviving_centrality) {
    FairnessScalars out;
    const double u = 1.0 / static_cast<double>(p.size());
    for (double x : p) out.tv_uniform += 0.5 * std::abs(x - u);
    if (!surviving_centrality.empty()) {
        double mean = 0.0;
        for (double c : surviving_centrality) mean += c;
        mean /= static_cast<double>(surviving_centrality.size());
        double var = 0.0;
        for (double c : surviving_centrality) var += (c - mean) * (c - mean);
        var /= static_cast<double>(surviving_centrality.size());
        out.cv_centrality = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    }
    return out;
}

/// Centralities and predicted probabilities.
///
/// Components whose leading eigenvalue ties the global maximum (relative
/// 1e-9) survive. Each survivor gets the same total weight, split inside
/// the component as c_i^2 / sum c^2; every other state gets 0.
inline FairnessReport predicted_probabilities(const SolutionGraph& g, const PowerIterationOptions& opt = {}) {
    FairnessReport r;
    r.order = g.order;
    r.num_spins = g.manifold.num_spins;
    r.e0 = g.manifold.e0;
    r.tol = g.manifold.tol;
    const auto spectra = component_spectra(g, opt);

    double top = -std::numeric_limits<double>::infinity();
    for (const auto& s : spectra) top = std::max(top, s.lambda1);
    auto survives = [&](double l) { return l == top || std::abs(l - top) <= r.survivor_rel_tol * std::abs(top); };
    const auto n_survivors =
        std::count_if(spectra.begin(), spectra.end(), [&](const auto& s) { return survives(s.lambda1); });

    r.states.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        r.states[i].state = g.manifold.states[i];
        r.states[i].degree = g.A.row(static_cast<Eigen::Index>(i)).sum();
    }
    std::vector<double> surviving_c;
    for (std::size_t c = 0; c < spectra.size(); ++c) {
        const auto& s = spectra[c];
        const bool alive = survives(s.lambda1);
        r.components.push_back({s.members, s.lambda1, alive});
        const double peak = s.perron.maxCoeff();
        for (std::size_t k = 0; k < s.members.size(); ++k) {
            auto& st = r.states[static_cast<std::size_t>(s.members[k])];
            const double v = s.perron(static_cast<Eigen::Index>(k));
            st.component = static_cast<int>(c);
            st.eigen_unit = v;
            st.eigen = peak > 0.0 ? v / peak : 0.0;
            st.p = alive ? v * v / static_cast<double>(n_survivors) : 0.0;
            if (alive) surviving_c.push_back(st.eigen);
        }
    }
    if (auto flat = energy_flatness(g)) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            r.states[i].ef = (*flat)[i].ef;
            r.states[i].ref = (*flat)[i].ref;
        }
    }
    const auto p = r.probabilities();
    const auto fs = fairness_scalars(p, surviving_c);
    r.tv_uniform = fs.tv_uniform;
    r.cv_centrality = fs.cv_centrality;
    return r;
}

struct SpectralBounds {
    std::vector<int> members;
    double mean_degree = 0.0;
    double max_degree = 0.0;
    double lambda1 = 0.0;
    bool pass = false;
};

/// Per component of the unweighted graph (edge where an off-diagonal entry
/// is positive): checks mean degree <= lambda1 <= max degree.
inline std::vector<SpectralBounds> spectral_bounds(const Eigen::MatrixXd& weights, double slack = 1e-9) {
    const auto n = weights.rows();
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && weights(i, j) > 0.0) adj(i, j) = 1.0;
    std::vector<SpectralBounds> out;
    for (const auto& members : connected_components(adj).groups) {
        const Eigen::MatrixXd B = submatrix(adj, members);
        const Eigen::VectorXd deg = B.rowwise().sum();
        SpectralBounds b;
        b.members = members;
        b.mean_degree = deg.mean();
        b.max_degree = deg.maxCoeff();
        b.lambda1 = perron(B).lambda;
        b.pass = b.mean_degree <= b.lambda1 + slack && b.lambda1 <= b.max_degree + slack;
        out.push_back(std::move(b));
    }
    return out;
}

inline std::vector<SpectralBounds> spectral_bounds_check(const SolutionGraph& g) { return spectral_bounds(g.A); }

struct RankConcordance {
    double tau = 1.0;   ///< (concordant - discordant) / (concordant + discordant); 1 when no pair is ranked
    long concordant = 0;
    long discordant = 0;
    long tied = 0;      ///< pairs tied in either sequence, left out of tau
};

/// Kendall rank correlation of two equally long sequences. A pair is tied
/// when either difference is within `rel_tol` of the larger magnitude.
inline RankConcordance kendall_tau(std::span<const double> x, std::span<const double> y, double rel_tol = 1e-9) {
    if (x.size() != y.size()) throw ConfigError("rank concordance needs sequences of equal length");
    auto tied = [rel_tol](double a, double b) {
        return std::abs(a - b) <= rel_tol * std::max({std::abs(a), std::abs(b), 1e-300});
    };
    RankConcordance r;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (tied(x[i], x[j]) || tied(y[i], y[j])) {
                ++r.tied;
                continue;
            }
            ((x[i] < x[j]) == (y[i] < y[j]) ? r.concordant : r.discordant) += 1;
        }
    const long ranked = r.concordant + r.discordant;
    if (ranked) r.tau = static_cast<double>(r.concordant - r.discordant) / static_cast<double>(ranked);
    return r;
}

} // namespace fairqa
