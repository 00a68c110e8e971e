#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "perifrac/geometry.hpp"

namespace perifrac {

// Engineering constants of the simulated material.
struct MaterialConstants {
    double E = 0.0;    // Young's modulus [Pa]
    double nu = 0.0;   // Poisson ratio
    double rho = 0.0;  // mass density [kg/m^3]
    double Gc = 0.0;   // critical energy release rate [J/m^2]

    void validate() const {
        if (!(E > 0.0)) throw std::invalid_argument("material.E must be positive");
        if (!(nu > 0.0 && nu < 0.5)) throw std::invalid_argument("material.nu must lie in (0, 0.5)");
        if (!(rho > 0.0)) throw std::invalid_argument("material.rho must be positive");
        if (!(Gc > 0.0)) throw std::invalid_argument("material.Gc must be positive");
    }
};

// Calibrated constants of the bond force potential g(r) = g_inf (1 - e^{-beta r^2}).
// The model is bond-based, so mu == lambda by construction.
struct ModelParams {
    double g_inf = 0.0;    // potential asymptote [J/m^2]
    double beta = 0.0;     // [1/m]
    double r_c = 0.0;      // inflection of the force profile [sqrt(m)]
    double r_break = 0.0;  // bond-break threshold r^+ [sqrt(m)]
    double mu = 0.0;       // shear modulus [Pa]
    double lambda = 0.0;   // Lame modulus [Pa], equal to mu
    double rho = 0.0;      // mass density [kg/m^3]
    double Gc = 0.0;       // calibration input, kept for round-trip checks
    double horizon = 0.0;  // epsilon [m]
    int dim = 2;
    double fprime0 = 1.0;  // profile slope at zero; 1 for the exponential profile
};

inline double influence(double s) { return s < 1.0 ? 1.0 - s : 0.0; }

inline double unit_ball_volume(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: throw std::invalid_argument("dimension must be 2 or 3");
    }
}

// Scaled kernel rho^eps(xi) = J(xi/eps) / (eps * omega_d * eps^d).
inline double kernel_rho(double xi, double eps, int d) {
    if (!(xi > 0.0)) throw std::invalid_argument("kernel_rho: xi must be positive");
    if (d != 2 && d != 3) throw std::invalid_argument("kernel_rho: dimension must be 2 or 3");
    return influence(xi / eps) / (eps * unit_ball_volume(d) * std::pow(eps, d));
}

inline double potential(double r, const ModelParams& p) {
    return p.g_inf * (1.0 - std::exp(-p.beta * r * r));
}

// g'(r) = 2 g_inf beta r e^{-beta r^2}; peaks at r_c = 1/sqrt(2 beta).
inline double force_profile(double r, const ModelParams& p) {
    return 2.0 * p.g_inf * p.beta * r * std::exp(-p.beta * r * r);
}

inline double potential_second_deriv_zero(const ModelParams& p) {
    return 2.0 * p.g_inf * p.beta * p.fprime0;
}

// Two-point strain of the bond (x_i, x_j) under displacements (u_i, u_j).
struct BondStrain {
    double S = 0.0;    // dimensionless
    double r = 0.0;    // sqrt(|y-x|) * S  [sqrt(m)]
    double S_c = 0.0;  // critical strain r_c / sqrt(|y-x|) for this bond
};

inline BondStrain strain(const Vec2& u_i, const Vec2& u_j, const Vec2& x_i, const Vec2& x_j,
                         const ModelParams& p) {
    const Vec2 d = x_j - x_i;
    const double xi = norm(d);
    if (!(xi > 0.0)) throw std::invalid_argument("strain: coincident points");
    const Vec2 e = d * (1.0 / xi);
    BondStrain out;
    out.S = dot(u_j - u_i, e) / xi;
    const double sq = std::sqrt(xi);
    out.r = sq * out.S;
    out.S_c = p.r_c / sq;
    return out;
}

namespace detail {

// Composite Simpson on [0,1]; panels forced even and >= 2^14 so the
// quadrature stays an independent oracle for the closed forms.
template <class F>
double simpson01(F&& f, int panels = 16384) {
    if (panels % 2) ++panels;
    const double h = 1.0 / panels;
    double acc = f(0.0) + f(1.0);
    for (int k = 1; k < panels; ++k) acc += f(k * h) * (k % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double moment_integral(int d) {
    return simpson01([d](double r) { return std::pow(r, d) * influence(r); });
}

}  // namespace detail

// Calibrates (g_inf, beta, r_c) from (mu, Gc) so that the toughness and
// moduli quadratures reproduce the engineering constants. d=3 variant is
// carried for the quadrature cross-checks; the simulator itself is 2D.
inline ModelParams calibrate(const MaterialConstants& mat, double eps, int d,
                             double r_break_factor = 3.0, double fprime0 = 1.0) {
    mat.validate();
    if (d != 2 && d != 3) throw std::invalid_argument("calibrate: dimension must be 2 or 3");
    if (!(eps > 0.0)) throw std::invalid_argument("calibrate: horizon must be positive");
    if (!(r_break_factor >= 1.0)) throw std::invalid_argument("calibrate: r_break_factor must be >= 1");

    ModelParams p;
    p.dim = d;
    p.horizon = eps;
    p.rho = mat.rho;
    p.Gc = mat.Gc;
    p.fprime0 = fprime0;
    p.mu = mat.E / (2.0 * (1.0 + mat.nu));
    p.lambda = p.mu;

    // Closed forms for J(r) = 1 - r: int_0^1 r^2 J = 1/12, int_0^1 r^3 J = 1/20.
    if (d == 2) {
        p.g_inf = 3.0 * M_PI * mat.Gc;                              // = Gc / ((2 w1/w2) * 1/12)
        p.beta = 16.0 * p.mu / (M_PI * fprime0 * mat.Gc);           // = 48 mu / (g_inf f'(0))
    } else {
        p.g_inf = 40.0 * mat.Gc / 3.0;                              // = Gc / ((2 w2/w3) * 1/20)
        p.beta = 100.0 * p.mu / (p.g_inf * fprime0);
    }
    p.r_c = 1.0 / std::sqrt(2.0 * p.beta);
    p.r_break = r_break_factor * p.r_c;
    return p;
}

// Gc^eps = g_inf (2 w_{d-1}/w_d) int_0^1 r^d J(r) dr, evaluated numerically.
// Independent of eps; serves as the calibration round-trip oracle.
inline double fracture_toughness_quadrature(const ModelParams& p, int d) {
    const double geom = 2.0 * unit_ball_volume(d - 1) / unit_ball_volume(d);
    return p.g_inf * geom * detail::moment_integral(d);
}

// mu = lambda = c_d g''(0) int_0^1 r^d J(r) dr with c_2 = 1/8, c_3 = 1/10.
struct Moduli {
    double mu = 0.0;
    double lambda = 0.0;
};

inline Moduli effective_moduli(const ModelParams& p, int d) {
    double c;
    if (d == 2) c = 1.0 / 8.0;
    else if (d == 3) c = 1.0 / 10.0;
    else throw std::invalid_argument("effective_moduli: dimension must be 2 or 3");
    const double m = c * potential_second_deriv_zero(p) * detail::moment_integral(d);
    return {m, m};
}

// L * 16 mu / (pi f'(0) Gc) = L * beta: elastic force over fracture
// resistance, times the domain length scale.
inline double dimensionless_beta(double L, const ModelParams& p) {
    if (!(L > 0.0)) throw std::invalid_argument("dimensionless_beta: L must be positive");
    return L * p.beta;
}

}  // namespace perifrac
