#pragma once

#include <cmath>
#include <functional>

// Small self-contained quadrature helpers used as independent references in
// the tests. Nothing here touches the library's own special-function or
// transform code paths.
namespace oracles {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 44 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, 0.5 * tol, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, 0.5 * tol, depth + 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-15) {
    return simpson_rec(f, a, b, f(a), f(0.5 * (a + b)), f(b), tol, 0);
}

// Dawson function through the singularity-free rewrite
//   D(x) = e^{-x^2} int_0^x e^{t^2} dt = int_0^x e^{-u(2x-u)} du,
// whose integrand stays in (0, 1] for x > 0. No scaled exponentials needed.
inline double dawson_ref(double x) {
    if (x == 0.0) return 0.0;
    if (x < 0.0) return -dawson_ref(-x);
    return integrate([x](double u) { return std::exp(-u * (2.0 * x - u)); }, 0.0, x,
                     1e-16);
}

// erfcx(a) = e^{a^2} erfc(a) = (2/sqrt(pi)) int_0^inf e^{-u^2 - 2au} du for
// a >= 0; the tail beyond u = 9 is below 1e-35 regardless of a.
inline double erfcx_ref(double a) {
    const double val =
        integrate([a](double u) { return std::exp(-u * u - 2.0 * a * u); }, 0.0, 9.0,
                  1e-18);
    return 2.0 / std::sqrt(M_PI) * val;
}

}  // namespace oracles
