#pragma once

#include "plemelj.hpp"
#include "spectral.hpp"

namespace bgk {

// The transforms evaluate boundary values of the dispersion function along
// the essential line through one fixed Plemelj branch: the side opposite to
// sgn(xi). The Parseval identity is the arbiter of that pairing and it is
// satisfied to round-off only for this choice (the alternative fails at
// order one; see the tests).
inline Side transform_side(double xi) {
    return xi > 0.0 ? Side::minus : Side::plus;
}

// Denominators carried by the forward transforms, as functions of the
// spectral coordinate lambda (living on the velocity grid):
//   den_B = -2 D(lambda) - i (xi + s sqrt(pi) e^{-lambda^2}),  s = sgn(xi),
//   den_U = -2 D(lambda) + i (xi - s sqrt(pi) e^{-lambda^2}).
// |den_B| >= |xi| everywhere; den_U vanishes at lambda = 0 exactly when
// |xi| = sqrt(pi), the resonance.
inline cvec den_B(const Grid& g, double xi) {
    const double s = xi > 0.0 ? 1.0 : -1.0;
    const double spi = std::sqrt(M_PI);
    cvec d(g.point_count);
    for (int j = 0; j < g.point_count; ++j) {
        const double lam = g.v[j];
        d[j] = cplx(-2.0 * dawson(lam), -(xi + s * spi * std::exp(-lam * lam)));
    }
    return d;
}

inline cvec den_U(const Grid& g, double xi) {
    const double s = xi > 0.0 ? 1.0 : -1.0;
    const double spi = std::sqrt(M_PI);
    cvec d(g.point_count);
    for (int j = 0; j < g.point_count; ++j) {
        const double lam = g.v[j];
        d[j] = cplx(-2.0 * dawson(lam), xi - s * spi * std::exp(-lam * lam));
    }
    return d;
}

namespace detail {

inline GridFunction weighted(const GridFunction& f) {
    GridFunction out(*f.grid);
    for (int j = 0; j < f.grid->point_count; ++j)
        out[j] = f.values[j] * f.grid->w[j];
    return out;
}

}  // namespace detail

// Forward transform onto the continuous spectral representation,
//   B f = f - S_a(f w) / den_B,
// where S_a is the Plemelj operator on the side a = -sgn(xi). At xi = 0 the
// continuous component is just the fluctuation f - (f, 1)_w 1.
inline GridFunction forward_B(double xi, const GridFunction& f) {
    const Grid& g = *f.grid;
    if (xi == 0.0) {
        const cplx m = inner_w(f, ones(g));
        GridFunction out(g);
        for (int j = 0; j < g.point_count; ++j) out[j] = f.values[j] - m;
        return out;
    }
    const GridFunction s = plemelj(detail::weighted(f), transform_side(xi));
    const cvec d = den_B(g, xi);
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j)
        out[j] = f.values[j] - s.values[j] / d[j];
    return out;
}

// Companion transform U g = g - S_a(g w) / den_U. Its denominator hits zero
// at the resonance |xi| = sqrt(pi), so that zone is excluded unless the
// caller explicitly opts in.
inline GridFunction forward_U(double xi, const GridFunction& f,
                              bool allow_resonance = false) {
    const Grid& g = *f.grid;
    if (xi == 0.0) return forward_B(0.0, f);
    if (!allow_resonance && in_resonance_zone(xi))
        throw resonance_error("forward_U: xi within the resonance exclusion zone");
    const GridFunction s = plemelj(detail::weighted(f), transform_side(xi));
    const cvec d = den_U(g, xi);
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j)
        out[j] = f.values[j] - s.values[j] / d[j];
    return out;
}

// Adjoint of U, the reconstruction map from the continuous representation:
//   U* h = h + S_a(h w / conj(den_U)).
inline GridFunction adjoint_U(double xi, const GridFunction& h,
                              bool allow_resonance = false) {
    const Grid& g = *h.grid;
    if (xi == 0.0) return h;
    if (!allow_resonance && in_resonance_zone(xi))
        throw resonance_error("adjoint_U: xi within the resonance exclusion zone");
    const cvec d = den_U(g, xi);
    GridFunction hw(g);
    for (int j = 0; j < g.point_count; ++j)
        hw[j] = h.values[j] * g.w[j] / std::conj(d[j]);
    const GridFunction s = plemelj(hw, transform_side(xi));
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j)
        out[j] = h.values[j] + s.values[j];
    return out;
}

// Adjoint of B, same shape with the other denominator.
inline GridFunction adjoint_B(double xi, const GridFunction& h) {
    const Grid& g = *h.grid;
    if (xi == 0.0) return h;
    const cvec d = den_B(g, xi);
    GridFunction hw(g);
    for (int j = 0; j < g.point_count; ++j)
        hw[j] = h.values[j] * g.w[j] / std::conj(d[j]);
    const GridFunction s = plemelj(hw, transform_side(xi));
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j)
        out[j] = h.values[j] + s.values[j];
    return out;
}

// Full spectral data of a state: the continuous amplitude B f and the
// coefficient of the discrete mode (identically zero past the resonance).
struct SpectralAmplitudes {
    GridFunction continuous;
    cplx discrete = 0.0;
};

inline SpectralAmplitudes decompose(double xi, const GridFunction& f) {
    SpectralAmplitudes amps{forward_B(xi, f), 0.0};
    if (std::abs(xi) < resonance_xi && !in_resonance_zone(xi)) {
        Mode m = mode(*f.grid, xi);
        amps.discrete = inner_w(f, m.e1bar) / m.omega_prime;
    }
    return amps;
}

inline GridFunction reconstruct(double xi, const SpectralAmplitudes& amps) {
    GridFunction out = adjoint_U(xi, amps.continuous);
    if (amps.discrete != 0.0) {
        Mode m = mode(*out.grid, xi);
        for (int j = 0; j < out.grid->point_count; ++j)
            out[j] += amps.discrete * m.e1[j];
    }
    return out;
}

// Spectral-side pairing that should reproduce (f, g)_w:
//   (B f, U g)_w + (P f, g)_w.
inline cplx parseval_pairing(double xi, const GridFunction& f, const GridFunction& g) {
    return inner_w(forward_B(xi, f), forward_U(xi, g)) +
           inner_w(project(xi, f), g);
}

}  // namespace bgk
