#include <gtest/gtest.h>

#include "fairqa/driver.hpp"

using namespace fairqa;

TEST(Driver, TransverseFieldSingleFlip) {
    const auto V = DriverSpec::transverse_field(3);
    EXPECT_EQ(V.matrix_element(parse_spins("↑↓↓"), parse_spins("↓↓↓")), -1.0);
    EXPECT_EQ(V.matrix_element(parse_spins("↑↑↑"), parse_spins("↓↓↑")), 0.0);
    EXPECT_EQ(V.matrix_element(parse_spins("↑↑↑"), parse_spins("↑↑↑")), 0.0);
}

TEST(Driver, PairTerm) {
    const DriverSpec V(5, {{bit(2) | bit(3), -1.0}});
    EXPECT_EQ(V.matrix_element(parse_spins("↑↑↑↑↑"), parse_spins("↑↑↓↓↑")), -1.0);
}

TEST(Driver, NeighborsOrderedByMask) {
    const auto V = DriverSpec::transverse_field(3);
    const auto nb = V.neighbors(parse_spins("111"));
    ASSERT_EQ(nb.size(), 3u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
        EXPECT_EQ(hamming(nb[k].first, parse_spins("111")), 1);
        EXPECT_EQ(nb[k].second, -1.0);
        if (k) EXPECT_LT(V.terms()[k - 1].mask, V.terms()[k].mask);
    }
    EXPECT_TRUE(DriverSpec(3, {}).neighbors(SpinConfig{}).empty());
}

TEST(Driver, CombinedNeighbourCount) {
    const auto V = DriverSpec::transverse_field(5).with_pairs({{0, 1}, {2, 3}});
    EXPECT_EQ(V.neighbors(SpinConfig{0b10101}).size(), 7u);
    EXPECT_EQ(DriverSpec::transverse_plus_pairs(5).terms().size(), 15u);
}

TEST(Driver, RejectsInvalidTerms) {
    EXPECT_THROW(DriverSpec(3, {{0b001, 0.5}}), ConfigError);
    EXPECT_THROW(DriverSpec(3, {{0, -1.0}}), ConfigError);
    EXPECT_THROW(DriverSpec(3, {{0b1000, -1.0}}), ConfigError);
}

TEST(Driver, MergesAndDropsZero) {
    const DriverSpec V(3, {{0b011, -0.5}, {0b011, -0.25}, {0b100, 0.0}});
    ASSERT_EQ(V.terms().size(), 1u);
    EXPECT_EQ(V.terms()[0].coeff, -0.75);
}

TEST(Driver, FullMatrixSymmetricAndStoquastic) {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& V : {DriverSpec::transverse_field(n), DriverSpec::transverse_plus_pairs(n)}) {
            const std::uint64_t dim = 1u << n;
            for (std::uint64_t s = 0; s < dim; ++s)
                for (std::uint64_t t = 0; t < dim; ++t) {
                    const double a = V.matrix_element(SpinConfig{s}, SpinConfig{t});
                    EXPECT_EQ(a, V.matrix_element(SpinConfig{t}, SpinConfig{s}));
                    EXPECT_LE(a, 0.0);
                    bool is_mask = false;
                    for (const auto& x : V.terms()) is_mask |= x.mask == (s ^ t);
                    EXPECT_EQ(a != 0.0, is_mask);
                }
        }
    }
}
