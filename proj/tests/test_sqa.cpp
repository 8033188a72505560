#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "fairqa/fixtures.hpp"
#include "fairqa/sqa.hpp"

using namespace fairqa;
using namespace fairqa::sqa;

TEST(Sqa, InterSliceCoupling) {
    EXPECT_NEAR(inter_slice_coupling(10.0, 3.0, 32), -0.5 * std::log(std::tanh(30.0 / 32)), 1e-15);
    EXPECT_EQ(inter_slice_coupling(10.0, 0.0, 32), kMaxInterSliceCoupling);
    EXPECT_EQ(inter_slice_coupling(10.0, 1e-20, 32), kMaxInterSliceCoupling);
    EXPECT_LT(inter_slice_coupling(10.0, 1e-12, 32), kMaxInterSliceCoupling);
}

TEST(Sqa, ScheduleEndpoints) {
    SqaConfig c;
    EXPECT_DOUBLE_EQ(c.gamma_at(0), c.gamma_start);
    EXPECT_DOUBLE_EQ(c.gamma_at(c.sweeps - 1), c.gamma_end);
    c.trotter_slices = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = SqaConfig{};
    c.gamma_end = 5.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Sqa, FlipDeltaMatchesEnergyDifference) {
    const auto m = fixtures::matsuda();
    const PathIntegral pi(m, 2);
    for (std::uint64_t s = 0; s < 32; ++s)
        for (int i = 0; i < 5; ++i)
            EXPECT_NEAR(pi.flip_delta(s, i), m.energy(SpinConfig{s ^ bit(i)}) - m.energy(SpinConfig{s}), 1e-12);
}

TEST(Sqa, StationaryDistributionMatchesTrotterWeight) {
    // N = 2, M = 4: 256 replica configurations, exact weights by enumeration.
    const IsingModel m(2, {{{0, 1}, -0.5}, {{0}, 0.3}});
    constexpr int kSlices = 4;
    const double beta = 1.0, gamma = 1.0;
    std::vector<double> exact(256);
    double z = 0.0;
    for (std::uint64_t c = 0; c < 256; ++c) {
        std::vector<std::uint64_t> sl(kSlices);
        for (int k = 0; k < kSlices; ++k) sl[k] = (c >> (2 * k)) & 3U;
        exact[c] = std::exp(log_weight(m, sl, beta, gamma));
        z += exact[c];
    }
    for (auto& w : exact) w /= z;

    PathIntegral pi(m, kSlices);
    std::mt19937_64 rng(7);
    pi.randomize(rng);
    std::vector<double> hist(256, 0.0);
    constexpr int kBurn = 1000, kSweeps = 400000;
    for (int t = 0; t < kBurn + kSweeps; ++t) {
        pi.sweep(beta, gamma, rng);
        if (t < kBurn) continue;
        std::uint64_t c = 0;
        for (int k = 0; k < kSlices; ++k) c |= pi.slices()[k] << (2 * k);
        hist[c] += 1.0 / kSweeps;
    }
    double tv = 0.0;
    for (int c = 0; c < 256; ++c) tv += 0.5 * std::abs(hist[c] - exact[c]);
    EXPECT_LT(tv, 0.02);
}

TEST(Sqa, DerivedSeedsDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 10; ++r)
        for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(42, r, s));
    EXPECT_EQ(seen.size(), 1000u);
}

TEST(Sqa, DeterministicAcrossThreadCounts) {
    const auto m = fixtures::matsuda();
    SqaConfig c;
    c.sweeps = 50;
    c.samples = 20;
    c.runs = 3;
    c.threads = 1;
    const auto a = run_experiment(m, fixtures::matsuda_ground_states(), c);
    c.threads = 4;
    const auto b = run_experiment(m, fixtures::matsuda_ground_states(), c);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.out_of_set, b.out_of_set);
    c.seed = 43;
    const auto d = run_experiment(m, fixtures::matsuda_ground_states(), c);
    EXPECT_NE(a.counts, d.counts);
}

TEST(Sqa, TallyNormalization) {
    const auto m = fixtures::matsuda();
    SqaConfig c;
    c.sweeps = 30;
    c.samples = 25;
    c.runs = 4;
    const auto t = run_experiment(m, fixtures::matsuda_ground_states(), c);
    EXPECT_EQ(t.runs(), 4);
    for (int r = 0; r < t.runs(); ++r) {
        long sum = t.out_of_set[r];
        for (long v : t.counts[r]) sum += v;
        EXPECT_EQ(sum, 25);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < t.targets.size(); ++i) total += t.mean_frequency(i);
    long out = 0;
    for (long v : t.out_of_set) out += v;
    EXPECT_NEAR(total + static_cast<double>(out) / 100.0, 1.0, 1e-12);
}

TEST(Sqa, FerromagneticPairAligns) {
    const IsingModel m(2, {{{0, 1}, -1.0}});
    SqaConfig c;
    // Short anneals freeze worldlines anti-aligned (about 3% at 200 sweeps).
    c.sweeps = 1000;
    c.samples = 200;
    c.runs = 2;
    const auto t = run_experiment(m, {parse_spins("00"), parse_spins("11")}, c);
    EXPECT_GT(static_cast<double>(t.total_hits()) / 400.0, 0.99);
}

TEST(Sqa, FreeSpinIsBalanced) {
    const IsingModel m(1, {});
    SqaConfig c;
    c.sweeps = 50;
    c.samples = 500;
    c.runs = 4;
    const auto t = run_experiment(m, {parse_spins("1")}, c);
    // binomial, sd = sqrt(2000 * 0.25) ~ 22
    EXPECT_NEAR(static_cast<double>(t.total_hits()), 1000.0, 110.0);
}
