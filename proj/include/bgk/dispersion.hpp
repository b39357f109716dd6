#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "special.hpp"

namespace bgk {

inline constexpr double resonance_xi = 1.7724538509055160273;  // sqrt(pi)
inline constexpr double series_xi_max = 0.5;

// omega(lambda, xi) = 1 - integral w(v) / (i v xi + 1 + lambda) dv.
// Zeros in Re(lambda) > -1 are the discrete eigenvalues; for |xi| < sqrt(pi)
// there is exactly one, real, in (-1, 0].

// Exact evaluation on the real axis lambda > -1 (any xi), via
//   omega = 1 - (sqrt(pi)/|xi|) erfcx((1+lambda)/|xi|).
// Valid arbitrarily close to lambda = -1, where the quadrature form loses a
// boundary layer of width |xi|/(2 pi) * dx around the continuum.
inline double omega_real(double lambda, double xi) {
    if (xi == 0.0) return 1.0 - 1.0 / (1.0 + lambda);
    const double a = (1.0 + lambda) / std::abs(xi);
    return 1.0 - std::sqrt(M_PI) / std::abs(xi) * erfcx(a);
}

// Trapezoid quadrature of the defining integral; needs lambda away from the
// essential line Re(lambda) = -1.
inline cplx omega_quadrature(cplx lambda, double xi, const Grid& g) {
    if (xi == 0.0) return 1.0 - 1.0 / (1.0 + lambda);
    if (std::abs(lambda.real() + 1.0) < 1e-3)
        throw std::domain_error(
            "omega_quadrature: lambda within 1e-3 of the essential line");
    cplx acc = 0.0;
    for (int j = 0; j < g.point_count; ++j)
        acc += g.w[j] / (cplx(0.0, g.v[j] * xi) + 1.0 + lambda);
    return 1.0 - g.dx * acc;
}

inline cplx omega(cplx lambda, double xi, const Grid& g) {
    if (xi == 0.0) return 1.0 - 1.0 / (1.0 + lambda);
    if (lambda.imag() == 0.0 && lambda.real() > -1.0)
        return omega_real(lambda.real(), xi);
    return omega_quadrature(lambda, xi, g);
}

// Boundary extensions onto the essential line, parameterized by the real
// spectral variable lambda (the point is -1 - i*lambda*xi from above for
// omega_plus, -1 + i*lambda*xi for omega_minus). Closed forms in the Dawson
// function; these never go through quadrature.
inline cplx omega_plus(double lambda, double xi) {
    const double e = std::exp(-lambda * lambda);
    return cplx(1.0 - std::sqrt(M_PI) / std::abs(xi) * e, -2.0 * dawson(lambda) / xi);
}

inline cplx omega_minus(double lambda, double xi) {
    const double e = std::exp(-lambda * lambda);
    return cplx(1.0 + std::sqrt(M_PI) / std::abs(xi) * e, -2.0 * dawson(lambda) / xi);
}

// d omega / d lambda through the algebraic identity
//   1 = (xi^2/2) omega' + (1+lambda)(1-omega),
// which pins omega' without differencing. At lambda = -1 the omega term
// drops and omega' = 2/xi^2 (so 2/pi at the resonance frequencies).
inline cplx omega_prime_lambda(cplx lambda, double xi, const Grid& g) {
    if (xi == 0.0) return 1.0 / ((1.0 + lambda) * (1.0 + lambda));
    if (std::abs(lambda + 1.0) < 1e-14) return 2.0 / (xi * xi);
    return 2.0 * (1.0 - (1.0 + lambda) * (1.0 - omega(lambda, xi, g))) / (xi * xi);
}

inline double omega_prime_real(double lambda, double xi) {
    if (xi == 0.0) return 1.0 / ((1.0 + lambda) * (1.0 + lambda));
    return 2.0 * (1.0 - (1.0 + lambda) * (1.0 - omega_real(lambda, xi))) / (xi * xi);
}

// Unique real root of omega(., xi) in (-1, 0], present iff |xi| < sqrt(pi).
// Bisection brackets the root (omega < 0 near -1, omega(0,.) > 0), Newton
// polishes it to ~1e-15; the exact real-axis form keeps the root honest even
// at 1 + lambda* ~ 4e-4 (xi = 1.772).
inline std::optional<double> lambda_star(double xi) {
    if (xi == 0.0) return 0.0;
    if (std::abs(xi) >= resonance_xi) return std::nullopt;
    double lo = -1.0 + 1e-8, hi = 0.0;
    if (omega_real(lo, xi) >= 0.0) return std::nullopt;  // not reachable for |xi|<sqrt(pi)
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (omega_real(mid, xi) < 0.0 ? lo : hi) = mid;
    }
    double lam = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double om = omega_real(lam, xi);
        if (std::abs(om) < 1e-14) break;
        lam -= om / omega_prime_real(lam, xi);
        lam = std::clamp(lam, -1.0 + 1e-15, 0.0);
    }
    return lam;
}

struct DispersionPoint {
    double xi = 0.0;
    std::optional<double> lambda_star;  // absent for |xi| >= sqrt(pi)
    double omega_prime = 0.0;           // at the root, when present
    double residual = 0.0;              // |omega(lambda*, xi)|
    bool at_resonance_boundary = false; // |xi| within 1e-6 of sqrt(pi)
};

inline DispersionPoint dispersion_point(double xi) {
    DispersionPoint p;
    p.xi = xi;
    p.at_resonance_boundary = std::abs(std::abs(xi) - resonance_xi) < 1e-6;
    p.lambda_star = lambda_star(xi);
    if (p.lambda_star) {
        p.residual = std::abs(omega_real(*p.lambda_star, xi));
        p.omega_prime = (xi == 0.0) ? 1.0 : -2.0 * *p.lambda_star / (xi * xi);
    }
    return p;
}

// Taylor coefficients of lambda*(xi) = sum_j a_{2j} xi^{2j} near 0, from the
// recursion a_2 = -1/2, a_{2j} = sum_{r=1}^{j-1} (2r-1) a_{2r} a_{2(j-r)}.
// The sequence diverges factorially; the series is asymptotic only.
inline std::vector<double> series_coefficients(int pairs) {
    std::vector<double> a(pairs + 1, 0.0);  // a[j] = a_{2j}
    if (pairs >= 1) a[1] = -0.5;
    for (int j = 2; j <= pairs; ++j) {
        double s = 0.0;
        for (int r = 1; r < j; ++r) s += (2 * r - 1) * a[r] * a[j - r];
        a[j] = s;
    }
    return a;
}

// Partial sum through xi^J (J even). Caller is trusted with small |xi| only;
// beyond series_xi_max the asymptotic series is useless and we refuse.
inline double lambda_star_series(double xi, int order) {
    if (std::abs(xi) > series_xi_max)
        throw std::domain_error("lambda_star_series: |xi| beyond series range");
    if (order < 2 || order > 32)
        throw std::domain_error("lambda_star_series: order must be in [2, 32]");
    const int pairs = order / 2;
    const auto a = series_coefficients(pairs);
    double s = 0.0, x2j = 1.0;
    const double x2 = xi * xi;
    for (int j = 1; j <= pairs; ++j) {
        x2j *= x2;
        s += a[j] * x2j;
    }
    return s;
}

// Residual of the implicit scalar equation for the root,
//   e^{-z^2} = (sqrt(pi)/xi) (sgn xi - erf z),  z = (1+lambda)/xi,
// evaluated in the erfcx form that stays exact for z large.
inline double implicit_residual(double lambda, double xi) {
    if (xi == 0.0) return std::abs(lambda);
    const double ax = std::abs(xi);
    const double z = (1.0 + lambda) / ax;
    return std::exp(-z * z) * std::abs(1.0 - std::sqrt(M_PI) / ax * erfcx(z));
}

// Transport of the root along the curve: differentiate omega(lambda*(xi), xi)
// = 0 to get d lambda/d xi = xi/(2 lambda) + lambda/xi + 1/xi, integrate by
// RK4 from x0, and compare against freshly computed roots at checkpoints.
inline double lambda_star_ode_check(double x0, double x1, double step = 1e-4,
                                    int checkpoints = 40) {
    auto rhs = [](double x, double y) { return x / (2.0 * y) + y / x + 1.0 / x; };
    auto start = lambda_star(x0);
    if (!start || *start == 0.0)
        throw std::domain_error("lambda_star_ode_check: start must carry a nonzero root");
    double y = *start;
    const int nstep = std::max(1, (int)std::lround((x1 - x0) / step));
    const double h = (x1 - x0) / nstep;
    double dev = 0.0;
    int next_check = 1;
    for (int i = 0; i < nstep; ++i) {
        const double x = x0 + i * h;
        const double k1 = rhs(x, y);
        const double k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double xnow = x0 + (i + 1) * h;
        const double xc = x0 + (x1 - x0) * next_check / checkpoints;
        if (next_check <= checkpoints && xnow >= xc - 1e-12) {
            dev = std::max(dev, std::abs(y - *lambda_star(xnow)));
            ++next_check;
        }
    }
    return dev;
}

// In the variable tau = xi^2, omega solves the backward heat equation
// d omega/d tau = -(1/4) d^2 omega/d lambda^2 on the real axis. Centered
// finite differences with step h; residual is O(h^2).
inline double heat_residual(double lambda, double tau, double h = 1e-4) {
    if (lambda <= -1.0 + 1e-2 || tau < 1e-2)
        throw std::domain_error("heat_residual: point too close to the boundary");
    auto om = [](double l, double t) { return omega_real(l, std::sqrt(t)); };
    const double dt = (om(lambda, tau + h) - om(lambda, tau - h)) / (2.0 * h);
    const double dll =
        (om(lambda + h, tau) - 2.0 * om(lambda, tau) + om(lambda - h, tau)) / (h * h);
    return std::abs(dt + 0.25 * dll);
}

// First-order ODE in xi at fixed lambda:
//   d omega/d xi + (1/xi + 2(1+lambda)^2/xi^3) omega
//     = 1/xi + 2 lambda (1+lambda)/xi^3.
inline double omega_xi_ode_residual(double lambda, double xi, double h = 1e-4) {
    if (xi < 0.1)
        throw std::domain_error("omega_xi_ode_residual: xi below 0.1");
    const double d = (omega_real(lambda, xi + h) - omega_real(lambda, xi - h)) / (2.0 * h);
    const double p = 1.0 + lambda;
    return std::abs(d + (1.0 / xi + 2.0 * p * p / (xi * xi * xi)) * omega_real(lambda, xi) -
                    (1.0 / xi + 2.0 * lambda * p / (xi * xi * xi)));
}

}  // namespace bgk
