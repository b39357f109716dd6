#pragma once

#include "dispersion.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace bgk {

inline bool in_resonance_zone(double xi) {
    return std::abs(std::abs(xi) - resonance_xi) < 1e-6;
}

// L_xi f = -(1 + i v xi) f + (f, 1)_w 1. The mass term uses the same
// trapezoid sum as inner_w; several discrete identities (adjointness, the
// transform diagonalization defect) rely on that literal agreement.
inline GridFunction apply_L(double xi, const GridFunction& f) {
    const Grid& g = *f.grid;
    cplx mass = 0.0;
    for (int j = 0; j < g.point_count; ++j) mass += f.values[j] * g.w[j];
    mass *= g.dx;
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j)
        out[j] = -(1.0 + cplx(0.0, g.v[j] * xi)) * f.values[j] + mass;
    return out;
}

// Adjoint in L2_w: the multiplier conjugates, the rank-one part is its own
// adjoint.
inline GridFunction apply_Lstar(double xi, const GridFunction& f) {
    return apply_L(-xi, f);
}

// Discrete eigenmode pair at the root lambda*(xi):
//   e1 = 1/(i v xi + 1 + lambda*),   L e1 = lambda* e1,
//   e1bar = conj(e1),                L* e1bar = lambda* e1bar,
// normalized so (e1, 1)_w = 1 and (e1, e1bar)_w = omega'(lambda*).
struct Mode {
    double xi = 0.0;
    double lambda = 0.0;
    double omega_prime = 1.0;
    GridFunction e1, e1bar;
};

inline Mode mode(const Grid& g, double xi) {
    if (in_resonance_zone(xi))
        throw resonance_error("mode: xi within the resonance exclusion zone");
    auto lam = lambda_star(xi);
    if (!lam)
        throw resonance_error("mode: no discrete eigenvalue for |xi| >= sqrt(pi)");
    Mode m;
    m.xi = xi;
    m.lambda = *lam;
    m.e1 = GridFunction(g);
    m.e1bar = GridFunction(g);
    // Below |xi| ~ 1e-7 the root lambda* ~ -xi^2/2 sinks under the root
    // finder's absolute resolution and -2 lambda* / xi^2 turns to noise; the
    // zero-frequency branch is the accurate evaluation there.
    if (std::abs(xi) < 1e-7) {
        m.xi = xi;
        m.lambda = 0.0;
        m.omega_prime = 1.0;
        for (int j = 0; j < g.point_count; ++j) m.e1[j] = m.e1bar[j] = 1.0;
        return m;
    }
    m.omega_prime = -2.0 * m.lambda / (xi * xi);
    for (int j = 0; j < g.point_count; ++j) {
        const cplx d(1.0 + m.lambda, g.v[j] * xi);
        m.e1[j] = 1.0 / d;
        m.e1bar[j] = 1.0 / std::conj(d);
    }
    return m;
}

// Riesz projector onto the discrete mode: P f = (f, e1bar)_w / omega' * e1.
// Identically zero for |xi| > sqrt(pi) (no discrete spectrum); at xi = 0 it
// is the equilibrium projection V f = (f, 1)_w 1.
inline GridFunction project(double xi, const GridFunction& f) {
    if (in_resonance_zone(xi))
        throw resonance_error("project: xi within the resonance exclusion zone");
    const Grid& g = *f.grid;
    if (std::abs(xi) > resonance_xi) return GridFunction(g, cplx(0.0));
    Mode m = mode(g, xi);
    const cplx mu = inner_w(f, m.e1bar) / m.omega_prime;
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j) out[j] = mu * m.e1[j];
    return out;
}

// (L_xi - lambda)^{-1} g by rank-one (Sherman-Morrison) reduction: with
// R0 = (-(1+ivxi) - lambda)^{-1} the full resolvent is
//   R g = R0 g - ((R0 g, 1)_w / omega(lambda, xi)) R0 1,
// exact at the discrete level, so the defining residual is pure round-off.
inline GridFunction resolvent_apply(cplx lambda, double xi, const GridFunction& f) {
    const Grid& g = *f.grid;
    const cplx om = omega(lambda, xi, g);
    if (std::abs(om) < 1e-8)
        throw std::domain_error("resolvent_apply: lambda at a zero of omega (spectral point)");
    GridFunction r0f(g), r0one(g);
    for (int j = 0; j < g.point_count; ++j) {
        const cplx d = -(1.0 + cplx(0.0, g.v[j] * xi)) - lambda;
        r0f[j] = f.values[j] / d;
        r0one[j] = 1.0 / d;
    }
    cplx mass = 0.0;
    for (int j = 0; j < g.point_count; ++j) mass += r0f.values[j] * g.w[j];
    const cplx c = g.dx * mass / om;
    for (int j = 0; j < g.point_count; ++j) r0f[j] -= c * r0one[j];
    return r0f;
}

}  // namespace bgk
