#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairqa/driver.hpp"
#include "fairqa/error.hpp"
#include "fairqa/groundset.hpp"
#include "fairqa/model.hpp"

namespace fairqa {

/// Matrix-free a*H0 + b*V on the full 2^N basis: diagonal lookup plus one
/// index xor per driver term.
class SparseHamiltonian {
public:
    SparseHamiltonian(const IsingModel& model, const DriverSpec& V) : n_(model.num_spins()) {
        if (V.num_spins() != n_) throw ConfigError("driver and model disagree on num_spins");
        const std::uint64_t dim = std::uint64_t{1} << n_;
        diag_.resize(dim);
        for (std::uint64_t s = 0; s < dim; ++s) diag_[s] = model.energy(SpinConfig{s});
        for (const auto& t : V.terms()) {
            masks_.push_back(t.mask);
            coeffs_.push_back(t.coeff);
        }
    }

    std::size_t dim() const noexcept { return diag_.size(); }
    int num_spins() const noexcept { return n_; }
    std::span<const double> diagonal() const noexcept { return diag_; }
    std::span<const std::uint64_t> masks() const noexcept { return masks_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    /// y = a * H0 x + b * V x
    template <class Scalar>
    void apply(const Scalar* x, Scalar* y, double a, double b) const {
        const std::size_t d = diag_.size();
        for (std::size_t i = 0; i < d; ++i) {
            Scalar acc = a * diag_[i] * x[i];
            for (std::size_t t = 0; t < masks_.size(); ++t) acc += (b * coeffs_[t]) * x[i ^ masks_[t]];
            y[i] = acc;
        }
    }

private:
    int n_;
    std::vector<double> diag_;
    std::vector<std::uint64_t> masks_;
    std::vector<double> coeffs_;
};

enum class OracleMethod { Quasistatic, Schrodinger };

inline const char* to_string(OracleMethod m) { return m == OracleMethod::Quasistatic ? "quasistatic" : "schrodinger"; }

struct OracleSettings {
    double lambda = 1e-3;
    double tau = 500.0;
    double dt = 1e-2;
    int max_spins_quasistatic = 20;
    int max_spins_schrodinger = 14;
    double residual_tol = 1e-10;
    double max_step_drift = 1e-8;
    int filter_degree = 16;
    int max_cycles = 2000;
};

/// Distribution over the manifold (same ordering) plus mass outside it.
struct OracleResult {
    OracleMethod method = OracleMethod::Quasistatic;
    std::vector<double> probs;
    double residual_mass = 0.0;
    OracleSettings settings;
    // quasistatic diagnostics
    std::vector<double> bottom_eigenvalues;
    int degeneracy = 0;
    double max_residual = 0.0;
    int cycles = 0;
    // schrodinger diagnostics
    double max_norm_drift = 0.0;
    long steps = 0;

    /// probs rescaled to sum to one over the manifold.
    std::vector<double> normalized() const {
        double s = 0.0;
        for (double p : probs) s += p;
        std::vector<double> out = probs;
        if (s > 0.0)
            for (double& p : out) p /= s;
        return out;
    }
};

inline double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ConfigError("distributions differ in length");
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return 0.5 * tv;
}

namespace detail {

inline void orthonormalize(Eigen::MatrixXd& X) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    X = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
}

inline Eigen::MatrixXd apply_block(const SparseHamiltonian& H, const Eigen::MatrixXd& X, double lambda) {
    Eigen::MatrixXd Y(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) H.apply(X.col(c).data(), Y.col(c).data(), 1.0, lambda);
    return Y;
}

} // namespace detail

/// Lowest eigenspace of H0 + lambda V restricted to the manifold.
///
/// Chebyshev-filtered subspace iteration on a block of M + 4 vectors: the
/// filter damps [E0 + gap/2, E_max], where gap is the smallest excitation of
/// H0 above the manifold, then Rayleigh-Ritz resolves the O(lambda) and
/// O(lambda^2) splittings inside the low band exactly. When the bottom Ritz
/// value is degenerate the overlaps are averaged over an orthonormal basis of
/// that eigenspace.
inline OracleResult quasistatic(const IsingModel& model, const DriverSpec& V, const GroundManifold& m,
                                const OracleSettings& s = {}) {
    if (!(s.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (model.num_spins() > s.max_spins_quasistatic)
        throw CapacityError("quasistatic oracle is limited to " + std::to_string(s.max_spins_quasistatic) + " spins");
    const SparseHamiltonian H(model, V);
    const auto dim = static_cast<Eigen::Index>(H.dim());
    const auto M = static_cast<Eigen::Index>(m.size());

    double gap = std::numeric_limits<double>::infinity();
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < H.dim(); ++i) {
        const double e = H.diagonal()[i];
        emax = std::max(emax, e);
        if (!m.contains(SpinConfig{i})) gap = std::min(gap, e - m.e0);
    }
    const double vnorm = s.lambda * V.one_norm();
    if (std::isfinite(gap) && !(gap > 4.0 * vnorm))
        throw ConfigError("lambda too large: lambda*|V| = " + std::to_string(vnorm) +
                          " is not below a quarter of the excitation gap " + std::to_string(gap));

    const Eigen::Index k = std::min<Eigen::Index>(dim, M + 4);
    const double hi = emax + vnorm;
    const double lo = std::isfinite(gap) ? m.e0 + 0.5 * gap : hi;

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd X(dim, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) X(i, j) = normal(rng);
    detail::orthonormalize(X);

    OracleResult r;
    r.method = OracleMethod::Quasistatic;
    r.settings = s;
    Eigen::VectorXd theta;
    const double half_width = 0.5 * (hi - lo);
    const double centre = 0.5 * (hi + lo);
    for (int cycle = 1;; ++cycle) {
        if (dim > k && half_width > 0.0) {
            // T_d((H - centre)/half_width) X via the three-term recurrence
            Eigen::MatrixXd prev = X;
            Eigen::MatrixXd cur = (detail::apply_block(H, X, s.lambda) - centre * X) / half_width;
            for (int d = 2; d <= s.filter_degree; ++d) {
                Eigen::MatrixXd next =
                    2.0 * (detail::apply_block(H, cur, s.lambda) - centre * cur) / half_width - prev;
                prev = std::move(cur);
                cur = std::move(next);
            }
            X = std::move(cur);
            detail::orthonormalize(X);
        }
        Eigen::MatrixXd HX = detail::apply_block(H, X, s.lambda);
        Eigen::MatrixXd G = X.transpose() * HX;
        G = 0.5 * (G + G.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        X = X * es.eigenvectors();
        HX = HX * es.eigenvectors();
        theta = es.eigenvalues();
        double worst = 0.0;
        for (Eigen::Index j = 0; j < M; ++j) worst = std::max(worst, (HX.col(j) - theta(j) * X.col(j)).norm());
        r.max_residual = worst;
        r.cycles = cycle;
        if (worst < s.residual_tol) break;
        if (cycle >= s.max_cycles)
            throw NumericalError("quasistatic eigensolver did not converge (residual " + std::to_string(worst) + ")");
    }

    const double scale = std::abs(m.e0) + vnorm + 1.0;
    const double degenerate = std::max(1e-10 * s.lambda * s.lambda,
                                       64.0 * std::numeric_limits<double>::epsilon() * scale);
    int deg = 1;
    while (deg < M && theta(deg) - theta(0) <= degenerate) ++deg;
    r.degeneracy = deg;
    for (Eigen::Index j = 0; j < M; ++j) r.bottom_eigenvalues.push_back(theta(j));

    r.probs.assign(m.size(), 0.0);
    double inside = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(m.states[i].bits);
        double acc = 0.0;
        for (int j = 0; j < deg; ++j) acc += X(row, j) * X(row, j);
        r.probs[i] = acc / deg;
        inside += r.probs[i];
    }
    r.residual_mass = std::max(0.0, 1.0 - inside);
    return r;
}

/// Real-time evolution of the linear schedule H(t) = (t/tau) H0 + (1 - t/tau) V
/// from the uniform superposition with fixed-step RK4.
inline OracleResult adiabatic(const IsingModel& model, const DriverSpec& V, const GroundManifold& m,
                              const OracleSettings& s = {}) {
    if (!(s.tau > 0.0) || !(s.dt > 0.0)) throw ConfigError("tau and dt must be positive");
    if (model.num_spins() > s.max_spins_schrodinger)
        throw CapacityError("Schrodinger oracle is limited to " + std::to_string(s.max_spins_schrodinger) + " spins");
    using cplx = std::complex<double>;
    const SparseHamiltonian H(model, V);
    const std::size_t dim = H.dim();
    const long steps = static_cast<long>(std::ceil(s.tau / s.dt));
    const double h = s.tau / static_cast<double>(steps);

    std::vector<cplx> psi(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const cplx minus_i(0.0, -1.0);
    auto deriv = [&](double t, const std::vector<cplx>& x, std::vector<cplx>& out) {
        const double f = t / s.tau;
        H.apply(x.data(), out.data(), f, 1.0 - f);
        for (auto& v : out) v *= minus_i;
    };

    OracleResult r;
    r.method = OracleMethod::Schrodinger;
    r.settings = s;
    for (long n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        deriv(t, psi, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
        deriv(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
        deriv(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + h * k3[i];
        deriv(t + h, tmp, k4);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            norm2 += std::norm(psi[i]);
        }
        const double norm = std::sqrt(norm2);
        const double drift = std::abs(norm - 1.0);
        r.max_norm_drift = std::max(r.max_norm_drift, drift);
        if (drift > s.max_step_drift) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "norm drift %.3g at t=%g exceeds %.3g; reduce dt", drift, t + h,
                          s.max_step_drift);
            throw StepSizeError(msg);
        }
        for (auto& v : psi) v /= norm;
    }
    r.steps = steps;
    r.probs.assign(m.size(), 0.0);
    double inside = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        r.probs[i] = std::norm(psi[m.states[i].bits]);
        inside += r.probs[i];
    }
    r.residual_mass = std::max(0.0, 1.0 - inside);
    return r;
}

struct CrossValidation {
    OracleResult quasistatic;
    OracleResult schrodinger;
    std::vector<double> predicted;
    double tv_quasistatic_schrodinger = 0.0;
    double tv_predicted_quasistatic = 0.0;
    double tv_predicted_schrodinger = 0.0;
};

/// Runs both oracles and compares them with a predicted distribution.
inline CrossValidation cross_validate(const IsingModel& model, const DriverSpec& V, const GroundManifold& m,
                                      std::span<const double> predicted, const OracleSettings& s = {}) {
    CrossValidation cv;
    cv.quasistatic = quasistatic(model, V, m, s);
    cv.schrodinger = adiabatic(model, V, m, s);
    cv.predicted.assign(predicted.begin(), predicted.end());
    const auto q = cv.quasistatic.normalized();
    const auto a = cv.schrodinger.normalized();
    cv.tv_quasistatic_schrodinger = total_variation(q, a);
    cv.tv_predicted_quasistatic = total_variation(predicted, q);
    cv.tv_predicted_schrodinger = total_variation(predicted, a);
    return cv;
}

} // namespace fairqa
