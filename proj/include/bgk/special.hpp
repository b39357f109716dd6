#pragma once

#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_dawson.h>
#include <gsl/gsl_sf_erf.h>

namespace bgk {

inline void quiet_gsl() {
    static bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

inline double weight(double v) { return std::exp(-v * v) / std::sqrt(M_PI); }

// Dawson function D(x) = e^{-x^2} int_0^x e^{t^2} dt.
inline double dawson(double x) {
    quiet_gsl();
    return gsl_sf_dawson(x);
}

// P.v. integral of w(v)/(v - lambda) over the line.
inline double pv_weight(double lambda) { return -2.0 * dawson(lambda); }

// Scaled complementary error function e^{x^2} erfc(x). The log form keeps it
// stable for large positive x, where erfc underflows long before erfcx does.
inline double erfcx(double x) {
    quiet_gsl();
    if (x < 0.0)
        return 2.0 * std::exp(x * x) - erfcx(-x);
    return std::exp(x * x + gsl_sf_log_erfc(x));
}

}  // namespace bgk
