#include <random>

#include <gtest/gtest.h>

#include "fairqa/fixtures.hpp"
#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"

using namespace fairqa;

TEST(Spin, ParseAndFormat) {
    EXPECT_EQ(parse_spins("110").bits, 0b011u);
    EXPECT_EQ(parse_spins("↑↑↓").bits, 0b011u);
    EXPECT_EQ(parse_spins("ud+-").bits, 0b0101u);
    EXPECT_EQ(to_string(SpinConfig{0b011}, 3), "110");
    EXPECT_EQ(to_arrows(SpinConfig{0b011}, 3), "↑↑↓");
    EXPECT_THROW(parse_spins("10x"), ConfigError);
    EXPECT_THROW(parse_spins("10", 3), ConfigError);
    EXPECT_EQ(hamming(parse_spins("1100"), parse_spins("0110")), 2);
}

TEST(Spin, OrderingIsIntegerValue) {
    EXPECT_LT(parse_spins("110"), parse_spins("101"));
    EXPECT_LT(parse_spins("101"), parse_spins("011"));
}

TEST(Model, TriangleEnergyAtUnitB) {
    const auto m = fixtures::triangle(1.0);
    EXPECT_DOUBLE_EQ(m.energy(parse_spins("↑↑↓")), -2.0);
}

TEST(Model, EmptyModelIsZero) {
    const IsingModel m(3, {});
    for (std::uint64_t s = 0; s < 8; ++s) EXPECT_EQ(m.energy(SpinConfig{s}), 0.0);
}

TEST(Model, ChainEnergy) {
    EXPECT_DOUBLE_EQ(fixtures::chain(4).energy(parse_spins("1111")), -3.0);
}

TEST(Model, TermsMergeAndSort) {
    const IsingModel m(3, {{{2, 0}, 1.0}, {{0, 2}, 0.5}, {{1}, -1.0}, {{}, 2.0}});
    ASSERT_EQ(m.terms().size(), 2u);
    EXPECT_EQ(m.terms()[0].spins, std::vector<int>{1});
    EXPECT_EQ(m.terms()[1].spins, (std::vector<int>{0, 2}));
    EXPECT_DOUBLE_EQ(m.coefficient({2, 0}), 1.5);
    EXPECT_DOUBLE_EQ(m.offset_value(), 2.0);
}

TEST(Model, InvalidTermsRejected) {
    EXPECT_THROW(IsingModel(2, {{{0, 2}, 1.0}}), ConfigError);
    EXPECT_THROW(IsingModel(2, {{{1, 1}, 1.0}}), ConfigError);
    EXPECT_THROW(IsingModel(0, {}), ConfigError);
}

TEST(Model, SubstituteTriangle) {
    const auto t = fixtures::triangle_template();
    const auto m = t.substitute({{"b", 1.0}});
    EXPECT_FALSE(m.is_template());
    std::vector<double> values(m.values().begin(), m.values().end());
    // sorted by order then support: s0, s1, s2, s0s1, s0s2, s1s2
    EXPECT_EQ(values, (std::vector<double>{-1, -1, -1, 1, 1, 1}));
    EXPECT_TRUE(t.is_template());
}

TEST(Model, SubstituteWithoutParamsIsIdentity) {
    const auto m = fixtures::chain(4);
    EXPECT_EQ(m.substitute({}), m);
}

TEST(Model, UnboundParameterNamed) {
    const IsingModel t(2, {{{0, 1}, LinearCoeff::parameter("J_F", -1.0)}, {{0}, LinearCoeff::parameter("h")}});
    try {
        (void)t.substitute({{"h", 1.0}});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("J_F"), std::string::npos);
    }
    try {
        (void)t.energy(SpinConfig{0});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("unresolved parameter"), std::string::npos);
    }
}

TEST(Model, ChainStrengthTemplate) {
    const IsingModel t(2, {{{0, 1}, LinearCoeff::parameter("J_F", -1.0)}});
    EXPECT_DOUBLE_EQ(t.substitute({{"J_F", 1.5}}).coefficient({0, 1}), -1.5);
}

TEST(Model, FieldsCouplingsMatchesDoubleSum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 6;
        std::vector<double> h(n);
        std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
        for (auto& x : h) x = u(rng);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) J[i][j] = u(rng);
        const auto m = from_fields_couplings(h, J);
        for (std::uint64_t s = 0; s < (1u << n); ++s) {
            const SpinConfig c{s};
            double direct = 0.0;
            for (int i = 0; i < n; ++i) direct -= h[i] * c.sigma(i);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) direct -= J[i][j] * c.sigma(i) * c.sigma(j);
            EXPECT_NEAR(m.energy(c), direct, 1e-12);
        }
    }
}

TEST(Model, EnergyInvariantUnderTermOrder) {
    std::vector<Term> terms{{{0, 1}, 0.7}, {{2}, -0.3}, {{0, 1, 2}, 1.1}, {{1}, 0.4}};
    const IsingModel a(3, terms);
    std::reverse(terms.begin(), terms.end());
    terms.push_back({{1, 0}, 0.0});
    const IsingModel b(3, terms);
    for (std::uint64_t s = 0; s < 8; ++s) EXPECT_DOUBLE_EQ(a.energy(SpinConfig{s}), b.energy(SpinConfig{s}));
}

TEST(Model, QuboEnergiesPreserved) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 1 + rep % 10;
        std::vector<std::vector<double>> Q(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) Q[i][j] = u(rng);
        const double offset = u(rng);
        const auto m = from_qubo(Q, offset);
        for (std::uint64_t s = 0; s < (1u << n); ++s) {
            double e = offset;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) e += Q[i][j] * ((s >> i) & 1) * ((s >> j) & 1);
            EXPECT_NEAR(m.energy(SpinConfig{s}), e, 1e-12);
        }
    }
}

TEST(Model, HigherOrderBinaryPolynomial) {
    const auto m = fixtures::single_edge_toy();
    for (std::uint64_t s = 0; s < 8; ++s) {
        const int x0 = s & 1, x1 = (s >> 1) & 1, x2 = (s >> 2) & 1;
        EXPECT_NEAR(m.energy(SpinConfig{s}), x1 + x2 - x1 * x2 - x0 * x1 * x2, 1e-12);
    }
}
