#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "perifrac/damage.hpp"

using namespace perifrac;

namespace {

MaterialConstants glass() { return {72e9, 0.33, 2440.0, 135.0}; }

ModelParams model() { return calibrate(glass(), 0.006, 2); }

}  // namespace

TEST(HProfile, EndpointsMidpointAndSlope) {
    EXPECT_DOUBLE_EQ(h_profile(-1.0, 0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(h_profile(0.0, 0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(h_profile(1.0, 0.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(h_profile(2.0, 0.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(h_profile(0.5, 0.0, 1.0), 0.5);
    // h' vanishes at both ends: finite differences shrink quadratically.
    const double d = 1e-6;
    EXPECT_NEAR((h_profile(0.0, 0.0, 1.0) - h_profile(d, 0.0, 1.0)) / d, 0.0, 1e-5);
    EXPECT_NEAR((h_profile(1.0 - d, 0.0, 1.0) - h_profile(1.0, 0.0, 1.0)) / d, 0.0, 1e-5);
    // Monotone non-increasing across the window.
    double prev = 1.0;
    for (int k = 0; k <= 100; ++k) {
        const double v = h_profile(k / 100.0, 0.0, 1.0);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
    }
}

TEST(HProfile, DegenerateWindowIsInstantBreak) {
    EXPECT_DOUBLE_EQ(h_profile(0.5, 0.5, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(h_profile(0.5 + 1e-12, 0.5, 0.5), 0.0);
    EXPECT_THROW(h_profile(0.0, 1.0, 0.5), std::invalid_argument);
}

TEST(DamageForm1, StaysPristineBelowThreshold) {
    const ModelParams m = model();
    DamageParams dp = make_damage_params(m, DamageForm::time_integral, /*x_D=*/1e-9);
    DamageState st(1);
    for (int k = 0; k < 1000; ++k)
        update_bond_damage(st, 0, 0.99 * dp.r_plus, 5e-7, k * 5e-7, dp);
    EXPECT_DOUBLE_EQ(st.gamma[0], 1.0);
    EXPECT_FALSE(st.broken[0]);
    EXPECT_DOUBLE_EQ(st.acc[0], 0.0);
}

TEST(DamageForm1, ConstantOverstrainBreaksAtPredictedStep) {
    const ModelParams m = model();
    const double dt = 5e-7;
    const double delta = 0.2 * m.r_c;
    const double x_D = 1e-11;
    DamageParams dp = make_damage_params(m, DamageForm::time_integral, x_D);
    DamageState st(1);
    const long expected = static_cast<long>(std::ceil(x_D / (delta * dt)));
    long broke_at = -1;
    for (long k = 1; k <= expected + 5; ++k) {
        update_bond_damage(st, 0, dp.r_plus + delta, dt, k * dt, dp);
        if (st.broken[0]) {
            broke_at = k;
            break;
        }
    }
    EXPECT_EQ(broke_at, expected);
    // Further straining leaves gamma at zero.
    update_bond_damage(st, 0, 10.0 * dp.r_plus, dt, 1.0, dp);
    EXPECT_DOUBLE_EQ(st.gamma[0], 0.0);
    EXPECT_TRUE(st.broken[0]);
}

TEST(DamageForm2, MaxMemoryNeverCrossedKeepsGammaOne) {
    const ModelParams m = model();
    DamageParams dp = make_damage_params(m, DamageForm::max_strain);
    DamageState st(1);
    // Rise to 0.9 r_plus, then drop; gamma stays 1 forever after.
    for (int k = 0; k < 100; ++k)
        update_bond_damage(st, 0, 0.9 * dp.r_plus * k / 100.0, 5e-7, k * 5e-7, dp);
    for (int k = 0; k < 100; ++k) update_bond_damage(st, 0, 0.1 * dp.r_plus, 5e-7, 1.0, dp);
    EXPECT_DOUBLE_EQ(st.gamma[0], 1.0);
}

TEST(DamageForm2, InstantBreakBeyondThreeRc) {
    const ModelParams m = model();
    DamageParams dp = make_damage_params(m, DamageForm::max_strain);  // r_D == r_plus
    EXPECT_DOUBLE_EQ(dp.r_plus, 3.0 * m.r_c);
    DamageState st(1);
    update_bond_damage(st, 0, 3.0 * m.r_c * 1.0001, 5e-7, 5e-7, dp);
    EXPECT_TRUE(st.broken[0]);
    EXPECT_DOUBLE_EQ(st.gamma[0], 0.0);
    EXPECT_DOUBLE_EQ(st.break_time[0], 5e-7);
}

TEST(DamageForm2, GammaFrozenAtRunningMaxAgainstReplayOracle) {
    const ModelParams m = model();
    // Smooth window so partial degradation exists.
    DamageParams dp = make_damage_params(m, DamageForm::max_strain, 0.0, 2.0 * m.r_c);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 5.5 * m.r_c);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> history(40);
        for (double& r : history) r = unif(rng);
        DamageState st(1);
        double running_max = 0.0;
        for (std::size_t k = 0; k < history.size(); ++k) {
            update_bond_damage(st, 0, history[k], 5e-7, (k + 1) * 5e-7, dp);
            running_max = std::max(running_max, history[k]);
            // Oracle: gamma depends on the history only through its maximum.
            const double expect = h_profile(running_max, dp.r_plus, dp.r_D);
            if (expect <= DamageState::kBrokenTol) {
                EXPECT_TRUE(st.broken[0]);
            } else {
                EXPECT_NEAR(st.gamma[0], expect, 1e-15);
            }
        }
    }
}

TEST(DamageForm2, PathIndependenceUnderPermutation) {
    const ModelParams m = model();
    DamageParams dp = make_damage_params(m, DamageForm::max_strain, 0.0, 2.0 * m.r_c);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 5.0 * m.r_c);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> history(25);
        for (double& r : history) r = unif(rng);
        auto final_gamma = [&](const std::vector<double>& seq) {
            DamageState st(1);
            for (std::size_t k = 0; k < seq.size(); ++k)
                update_bond_damage(st, 0, seq[k], 5e-7, (k + 1) * 5e-7, dp);
            return st.gamma[0];
        };
        const double base = final_gamma(history);
        std::vector<double> shuffled = history;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_DOUBLE_EQ(final_gamma(shuffled), base);
    }
}

TEST(DamageMonotonicity, GammaNonIncreasingOnRandomTrajectories) {
    const ModelParams m = model();
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unif(0.0, 6.0 * m.r_c);
    for (DamageForm form : {DamageForm::time_integral, DamageForm::max_strain}) {
        DamageParams dp = make_damage_params(m, form, 1e-11, 2.0 * m.r_c);
        DamageState st(8);
        std::vector<double> prev(8, 1.0);
        for (int k = 1; k <= 200; ++k) {
            for (std::size_t b = 0; b < 8; ++b) {
                update_bond_damage(st, b, unif(rng), 5e-7, k * 5e-7, dp);
                EXPECT_LE(st.gamma[b], prev[b] + 1e-15);
                prev[b] = st.gamma[b];
            }
        }
    }
}

TEST(ClassifyZones, ZeroFieldLeavesOnlyPreNotchFailures) {
    const double h = 0.01;
    ParticleGrid g = build_grid({8 * h, 8 * h, h, 2.5 * h});
    BondTable t = build_bond_table(g);
    DamageState dmg(t.bond_count());
    PreNotch notch{Segment{{0.0, 4 * h}, {4 * h, 4 * h}}};
    apply_prenotch(g, t, notch, dmg);
    const ModelParams m = model();
    std::vector<double> r(t.bond_count(), 0.0);
    const DamageZones z = classify_zones(dmg, r, m);
    EXPECT_EQ(z.failure_set.size(), dmg.broken_count());
    EXPECT_GT(z.failure_set.size(), 0u);
    EXPECT_TRUE(z.process_zone.empty());
    EXPECT_TRUE(z.softening_zone.empty());
}

TEST(ClassifyZones, UniformDilationPutsEveryBondInSoftening) {
    const double h = 0.002;
    ParticleGrid g = build_grid({10 * h, 10 * h, h, 3 * h});
    BondTable t = build_bond_table(g);
    DamageState dmg(t.bond_count());
    const ModelParams m = model();
    // Pick alpha so r = sqrt(xi) alpha lands in [r_c, r_break) for every
    // bond: the shortest bond sets the lower bound, the longest the upper.
    double xi_min = 1e300, xi_max = 0.0;
    for (std::size_t b = 0; b < t.bond_count(); ++b) {
        xi_min = std::min(xi_min, t.xi[b]);
        xi_max = std::max(xi_max, t.xi[b]);
    }
    const double lo = m.r_c / std::sqrt(xi_min);
    const double hi = m.r_break / std::sqrt(xi_max);
    ASSERT_LT(lo, hi);  // eps/h = 3 keeps the strain window nonempty
    const double alpha = 0.5 * (lo + hi);
    std::vector<double> r(t.bond_count());
    for (std::size_t b = 0; b < t.bond_count(); ++b) r[b] = std::sqrt(t.xi[b]) * alpha;
    const DamageZones z = classify_zones(dmg, r, m);
    EXPECT_EQ(z.softening_zone.size(), t.bond_count());
    EXPECT_TRUE(z.failure_set.empty());
}

TEST(ClassifyZones, BrokenBondsNeverReappear) {
    const ModelParams m = model();
    DamageParams dp = make_damage_params(m, DamageForm::max_strain);
    DamageState st(4);
    std::vector<double> r = {4.0 * m.r_c, 0.5 * m.r_c, 2.0 * m.r_c, 0.0};
    for (std::size_t b = 0; b < 4; ++b) update_bond_damage(st, b, r[b], 5e-7, 5e-7, dp);
    DamageZones z = classify_zones(st, r, m);
    ASSERT_EQ(z.failure_set.size(), 1u);
    EXPECT_EQ(z.failure_set[0], 0u);
    EXPECT_EQ(z.softening_zone.size(), 1u);  // bond 2 sits in [r_c, r_break)
    // Re-strain the broken bond hard; it stays in the failure set only.
    for (int k = 0; k < 10; ++k) update_bond_damage(st, 0, 10.0 * m.r_c, 5e-7, 1.0, dp);
    z = classify_zones(st, r, m);
    EXPECT_EQ(z.failure_set.size(), 1u);
    EXPECT_TRUE(z.process_zone.empty());
}

TEST(DamageIndex, PreNotchProducesHalfDamagedBand) {
    const double h = 0.002;
    ParticleGrid g = build_grid({40 * h, 20 * h, h, 3 * h});
    BondTable t = build_bond_table(g);
    DamageState dmg(t.bond_count());
    PreNotch notch{Segment{{0.0, 10 * h}, {20 * h, 10 * h}}};
    apply_prenotch(g, t, notch, dmg);
    const std::vector<double> phi = damage_index(t, dmg, 2);
    // A node hugging the notch in its interior loses about half its bonds.
    const std::uint32_t beside = g.index(10, 9);
    EXPECT_GT(phi[beside], 0.35);
    EXPECT_LT(phi[beside], 0.65);
    // Far field untouched.
    EXPECT_DOUBLE_EQ(phi[g.index(30, 10)], 0.0);
}

TEST(DamageParams, RejectsNegativeWindows) {
    const ModelParams m = model();
    EXPECT_THROW(make_damage_params(m, DamageForm::time_integral, -1e-9), std::invalid_argument);
    EXPECT_THROW(make_damage_params(m, DamageForm::max_strain, 0.0, -1e-9),
                 std::invalid_argument);
    const DamageParams dp = make_damage_params(m, DamageForm::max_strain, 0.0, 1e-5);
    EXPECT_DOUBLE_EQ(dp.r_D, m.r_break + 1e-5);
}
