#include <gtest/gtest.h>

#include "fairqa/fixtures.hpp"
#include "fairqa/metrics.hpp"
#include "fairqa/oracle.hpp"

using namespace fairqa;

namespace {

std::vector<double> predicted(const IsingModel& m, const DriverSpec& V) {
    return predicted_probabilities(resolve(m, enumerate(m), V)).probabilities();
}

} // namespace

TEST(Oracle, SparseHamiltonianMatchesDense) {
    const auto m = fixtures::matsuda();
    const auto V = DriverSpec::transverse_field(5).with_pairs({{2, 3}});
    const SparseHamiltonian H(m, V);
    const std::size_t dim = H.dim();
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<double> e(dim, 0.0), y(dim);
        e[col] = 1.0;
        H.apply(e.data(), y.data(), 1.0, 0.3);
        for (std::size_t row = 0; row < dim; ++row) {
            const double ref = (row == col ? m.energy(SpinConfig{row}) : 0.0) +
                               0.3 * V.matrix_element(SpinConfig{row}, SpinConfig{col});
            EXPECT_EQ(y[row], ref);
            // exact symmetry of the assembled operator
            std::vector<double> e2(dim, 0.0), y2(dim);
            e2[row] = 1.0;
            H.apply(e2.data(), y2.data(), 1.0, 0.3);
            EXPECT_EQ(y2[col], y[row]);
        }
    }
}

TEST(Oracle, QuasistaticChain) {
    const auto m = fixtures::chain(4);
    const auto V = DriverSpec::transverse_field(4);
    const auto r = quasistatic(m, V, enumerate(m));
    EXPECT_LT(total_variation(r.normalized(), predicted(m, V)), 1e-3);
    double sum = r.residual_mass;
    for (double p : r.probs) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-8);
    EXPECT_LT(r.max_residual, 1e-10);
}

TEST(Oracle, QuasistaticTriangleSymmetric) {
    const auto m = fixtures::triangle(1.0);
    const auto r = quasistatic(m, DriverSpec::transverse_field(3), enumerate(m));
    EXPECT_LT(total_variation(r.normalized(), std::vector<double>(3, 1.0 / 3.0)), 1e-6);
}

TEST(Oracle, QuasistaticMatsuda) {
    const auto m = fixtures::matsuda();
    const auto g = enumerate(m);
    const auto q = quasistatic(m, DriverSpec::transverse_field(5), g).normalized();
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto name = to_string(g.states[i], 5);
        if (name == "11111" || name == "00000") {
            EXPECT_LT(q[i], 1e-5);
        } else {
            lo = std::min(lo, q[i]);
            hi = std::max(hi, q[i]);
        }
    }
    EXPECT_LT(hi - lo, 1e-6);
}

TEST(Oracle, DegenerateBottomAveraged) {
    // Two decoupled copies of a symmetric pair: the bottom level of H0 + lambda V is
    // exactly two-fold degenerate, so the average over the eigenspace is used.
    const IsingModel m(2, {});
    const DriverSpec V(2, {{0b01, -1.0}});
    const auto g = enumerate(m);
    const auto r = quasistatic(m, V, g);
    EXPECT_EQ(r.degeneracy, 2);
    for (double p : r.normalized()) EXPECT_NEAR(p, 0.25, 1e-10);
}

TEST(Oracle, LambdaRobustness) {
    const auto m = fixtures::chain(4);
    const auto V = DriverSpec::transverse_field(4);
    const auto g = enumerate(m);
    const auto pt = predicted(m, V);
    double last = 1.0;
    for (double lambda : {4e-3, 2e-3, 1e-3, 5e-4}) {
        OracleSettings s;
        s.lambda = lambda;
        OracleSettings h = s;
        h.lambda = lambda / 2;
        const auto a = quasistatic(m, V, g, s).normalized();
        const auto b = quasistatic(m, V, g, h).normalized();
        EXPECT_LT(total_variation(a, b), 1.0 * lambda); // C = 1 for this fixture
        const double tv = total_variation(a, pt);
        EXPECT_LT(tv, last);
        last = tv;
    }
}

TEST(Oracle, BottomEigenvalueNearE0) {
    const auto m = fixtures::matsuda();
    const auto V = DriverSpec::transverse_field(5);
    const auto g = enumerate(m);
    const auto r = quasistatic(m, V, g);
    EXPECT_LE(std::abs(r.bottom_eigenvalues.front() - g.e0), 1e-3 * V.one_norm());
}

TEST(Oracle, ArgumentErrors) {
    const auto m = fixtures::chain(4);
    const auto V = DriverSpec::transverse_field(4);
    const auto g = enumerate(m);
    OracleSettings s;
    s.lambda = 0.0;
    EXPECT_THROW(quasistatic(m, V, g, s), ConfigError);
    s.lambda = 1.0;
    EXPECT_THROW(quasistatic(m, V, g, s), ConfigError);
    const IsingModel big(21, {{{0}, -1.0}});
    EXPECT_THROW(quasistatic(big, DriverSpec::transverse_field(21), from_states(big, {SpinConfig{1}})), CapacityError);
    OracleSettings t;
    t.tau = 0.0;
    EXPECT_THROW(adiabatic(m, V, g, t), ConfigError);
}

TEST(Oracle, AdiabaticSingleSpin) {
    const IsingModel m(1, {{{0}, -1.0}});
    OracleSettings s;
    s.tau = 100.0;
    const auto r = adiabatic(m, DriverSpec::transverse_field(1), enumerate(m), s);
    EXPECT_GT(r.probs[0], 1.0 - 1e-4);
    EXPECT_LT(r.max_norm_drift, 1e-8);
}

TEST(Oracle, AdiabaticChainAgreesWithQuasistatic) {
    const auto m = fixtures::chain(4);
    const auto V = DriverSpec::transverse_field(4);
    const auto g = enumerate(m);
    const auto a = adiabatic(m, V, g);
    const auto q = quasistatic(m, V, g);
    EXPECT_LT(total_variation(a.normalized(), q.normalized()), 0.02);
    double sum = a.residual_mass;
    for (double p : a.probs) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-8);
}

TEST(Oracle, AdiabaticTriangleOrdering) {
    const auto m = fixtures::triangle(0.5);
    const auto p = adiabatic(m, DriverSpec::transverse_field(3), enumerate(m)).normalized();
    // order: up-up-down, up-down-up, down-up-up
    EXPECT_NEAR(p[0], p[1], 1e-6);
    EXPECT_GT(p[2], p[0]);
}

TEST(Oracle, StepSizeErrorMessage) {
    OracleSettings s;
    s.dt = 1e-2;
    const auto m = fixtures::matsuda();
    try {
        adiabatic(m, DriverSpec::transverse_plus_pairs(5), enumerate(m), s);
        FAIL();
    } catch (const StepSizeError& e) {
        EXPECT_EQ(std::string(e.what()).find("0.000000"), std::string::npos) << e.what();
    }
}

TEST(Oracle, StepSizeError) {
    const auto m = fixtures::chain(4);
    OracleSettings s;
    s.tau = 20.0;
    s.dt = 0.5;
    EXPECT_THROW(adiabatic(m, DriverSpec::transverse_field(4), enumerate(m), s), StepSizeError);
}

TEST(Oracle, CrossValidateAllPairs) {
    const auto m = fixtures::matsuda();
    const auto V = DriverSpec::transverse_plus_pairs(5);
    const auto g = enumerate(m);
    const auto p = predicted(m, V);
    OracleSettings s;
    s.dt = 2e-3; // the fifteen-term driver is too stiff for the default step
    const auto cv = cross_validate(m, V, g, p, s);
    EXPECT_LT(cv.tv_predicted_quasistatic, 0.02);
    EXPECT_LT(cv.tv_predicted_schrodinger, 0.02);
    EXPECT_LT(cv.tv_quasistatic_schrodinger, 0.02);
}
