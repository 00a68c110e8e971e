#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "perifrac/material.hpp"

using namespace perifrac;

namespace {

MaterialConstants glass() { return {72e9, 0.33, 2440.0, 135.0}; }

}  // namespace

TEST(Strain, RigidMotionsProduceZeroStrain) {
    const MaterialConstants mat = glass();
    const ModelParams p = calibrate(mat, 0.006, 2);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double q = unif(rng);
        const Vec2 c{unif(rng), unif(rng)};
        auto rigid = [&](const Vec2& x) { return Vec2{q * x.y + c.x, -q * x.x + c.y}; };
        const Vec2 xi{unif(rng), unif(rng)};
        const Vec2 xj = xi + Vec2{0.004 * unif(rng), 0.004 * unif(rng)};
        if (norm(xj - xi) < 1e-6) continue;
        const BondStrain s = strain(rigid(xi), rigid(xj), xi, xj, p);
        EXPECT_LE(std::abs(s.S), 1e-12);
    }
}

TEST(Strain, UniformDilationGivesAlpha) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    const double alpha = 3.7e-4;
    const Vec2 xi{0.01, 0.02}, xj{0.013, 0.018};
    const BondStrain s = strain(xi * alpha, xj * alpha, xi, xj, p);
    EXPECT_NEAR(s.S, alpha, 1e-12 * alpha + 1e-18);
}

TEST(Strain, PointValuesAndSymmetry) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    const Vec2 xi{0.0, 0.0}, xj{0.004, 0.0};
    const Vec2 ui{0.0, 0.0}, uj{4e-6, 0.0};
    const BondStrain s = strain(ui, uj, xi, xj, p);
    EXPECT_NEAR(s.S, 1e-3, 1e-15);
    EXPECT_NEAR(s.r, 1e-3 * std::sqrt(0.004), 1e-12);  // ~6.325e-5
    // Swapping endpoints leaves the strain unchanged.
    const BondStrain s2 = strain(uj, ui, xj, xi, p);
    EXPECT_DOUBLE_EQ(s.S, s2.S);
    EXPECT_DOUBLE_EQ(s.r, s2.r);

    EXPECT_THROW(strain(ui, uj, xi, xi, p), std::invalid_argument);
}

TEST(Potential, EndpointsAndAsymptote) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    EXPECT_DOUBLE_EQ(potential(0.0, p), 0.0);
    EXPECT_DOUBLE_EQ(force_profile(0.0, p), 0.0);
    EXPECT_NEAR(potential(1.0, p), p.g_inf, 1e-9 * p.g_inf);  // beta r^2 huge
    // Even potential, odd force.
    EXPECT_DOUBLE_EQ(potential(2e-5, p), potential(-2e-5, p));
    EXPECT_DOUBLE_EQ(force_profile(2e-5, p), -force_profile(-2e-5, p));
}

TEST(Potential, ForceProfilePeaksAtRc) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    EXPECT_NEAR(p.r_c, 1.0 / std::sqrt(2.0 * p.beta), 1e-18);
    // Sampled supremum of |g'| matches the analytic maximum at r_c.
    const double analytic = p.g_inf * std::sqrt(2.0 * p.beta / M_E);
    EXPECT_NEAR(force_profile(p.r_c, p), analytic, 1e-10 * analytic);
    double sup = 0.0;
    for (int k = 0; k <= 20000; ++k) sup = std::max(sup, force_profile(k * 1e-8, p));
    EXPECT_LE(sup, analytic * (1 + 1e-12));
    EXPECT_GE(sup, analytic * (1 - 1e-4));
    // g''(r_c) = 0: the slope flips sign across r_c.
    const double d = 1e-9;
    EXPECT_GT(force_profile(p.r_c, p), force_profile(p.r_c - d, p));
    EXPECT_GT(force_profile(p.r_c, p), force_profile(p.r_c + d, p));
}

TEST(Kernel, SupportAndCenterValue) {
    EXPECT_DOUBLE_EQ(kernel_rho(0.006, 0.006, 2), 0.0);
    EXPECT_DOUBLE_EQ(kernel_rho(0.007, 0.006, 2), 0.0);
    // xi -> 0+ approaches the maximum 1/(eps omega_d eps^d).
    const double eps = 0.006;
    EXPECT_NEAR(kernel_rho(1e-12, eps, 2), 1.0 / (eps * M_PI * eps * eps),
                1e-6 / (eps * M_PI * eps * eps));
    // d=2, eps=6 mm, xi=3 mm.
    EXPECT_NEAR(kernel_rho(0.003, 0.006, 2), 7.36830e5, 1e1);
    EXPECT_THROW(kernel_rho(0.0, 0.006, 2), std::invalid_argument);
    EXPECT_THROW(kernel_rho(0.003, 0.006, 4), std::invalid_argument);
}

TEST(Calibration, PaperTableValues) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    EXPECT_NEAR(p.mu, 2.7068e10, 1e6);
    EXPECT_NEAR(p.g_inf, 3.0 * M_PI * 135.0, 1e-9);
    EXPECT_NEAR(p.g_inf, 1272.345, 1e-3);
    EXPECT_NEAR(p.beta, 1.0211e9, 1e5);
    EXPECT_NEAR(p.r_c, 2.2128e-5, 1e-9);
    EXPECT_DOUBLE_EQ(p.lambda, p.mu);
    EXPECT_DOUBLE_EQ(p.r_break, 3.0 * p.r_c);
    // Critical strain of a bond at xi = eps.
    EXPECT_NEAR(p.r_c / std::sqrt(0.006), 2.857e-4, 1e-7);
}

TEST(Calibration, BetaGinfIdentity) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    EXPECT_NEAR(p.beta * p.g_inf / (48.0 * p.mu), 1.0, 1e-12);
}

TEST(Calibration, RejectsBadInputs) {
    EXPECT_THROW(calibrate(glass(), 0.006, 4), std::invalid_argument);
    EXPECT_THROW(calibrate(glass(), -1.0, 2), std::invalid_argument);
    MaterialConstants bad = glass();
    bad.nu = 0.6;
    EXPECT_THROW(calibrate(bad, 0.006, 2), std::invalid_argument);
}

TEST(ToughnessQuadrature, RoundTripAndAnalyticIntegrals) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    // int_0^1 r^2 (1-r) dr = 1/12, via the same Simpson rule the check uses.
    const double i2 = detail::moment_integral(2);
    EXPECT_NEAR(i2, 1.0 / 12.0, 1e-12);
    const double gc = fracture_toughness_quadrature(p, 2);
    EXPECT_NEAR(gc, 135.0, 1e-6 * 135.0);
    // d=3: int r^3 (1-r) = 1/20, Gc = 3 g_inf / 40 for the same g_inf.
    EXPECT_NEAR(detail::moment_integral(3), 1.0 / 20.0, 1e-12);
    EXPECT_NEAR(fracture_toughness_quadrature(p, 3), 3.0 * p.g_inf / 40.0, 1e-9 * p.g_inf);
    // d=3 calibration round-trips through its own quadrature.
    const ModelParams p3 = calibrate(glass(), 0.006, 3);
    EXPECT_NEAR(fracture_toughness_quadrature(p3, 3), 135.0, 1e-6 * 135.0);
}

TEST(EffectiveModuli, RoundTripAndLimits) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    const Moduli m = effective_moduli(p, 2);
    EXPECT_NEAR(m.mu, p.mu, 1e-6 * p.mu);
    EXPECT_DOUBLE_EQ(m.mu, m.lambda);
    // g_inf -> 0 drives the modulus to zero (linear in g''(0)).
    ModelParams z = p;
    z.g_inf = 0.0;
    EXPECT_DOUBLE_EQ(effective_moduli(z, 2).mu, 0.0);
    // d=3 with the same (g_inf, beta): mu = (1/10) (2 g_inf beta) (1/20).
    EXPECT_NEAR(effective_moduli(p, 3).mu, 0.1 * 2.0 * p.g_inf * p.beta * 0.05,
                1e-9 * p.mu);
    const ModelParams p3 = calibrate(glass(), 0.006, 3);
    EXPECT_NEAR(effective_moduli(p3, 3).mu, p3.mu, 1e-6 * p3.mu);
}

TEST(DimensionlessBeta, DomainScaleRatio) {
    const ModelParams p = calibrate(glass(), 0.006, 2);
    EXPECT_NEAR(dimensionless_beta(0.96, p), 9.803e8, 1e5);
    EXPECT_NEAR(dimensionless_beta(1.0 / p.beta, p), 1.0, 1e-12);
    // Doubling Gc at fixed mu halves it.
    MaterialConstants m2 = glass();
    m2.Gc *= 2.0;
    const ModelParams p2 = calibrate(m2, 0.006, 2);
    EXPECT_NEAR(dimensionless_beta(0.96, p2), 0.5 * dimensionless_beta(0.96, p), 1e-3);
    EXPECT_THROW(dimensionless_beta(0.0, p), std::invalid_argument);
}
