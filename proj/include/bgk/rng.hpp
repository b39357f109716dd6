#pragma once

#include <cstdint>
#include <random>

#include "grid.hpp"

namespace bgk {

// Deterministic generator: raw mt19937_64 words mapped to doubles, gaussians
// by Box-Muller. std::normal_distribution is implementation-defined, which
// would break byte-identical output across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_) {
            have_ = false;
            return cache_;
        }
        const double u1 = ((eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = (eng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        cache_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double cache_ = 0.0;
};

// Smooth random test function: a few low harmonics plus low-order polynomials
// under a wide gaussian envelope, so it is well resolved on the default grid
// and decays fast enough that boundary leakage stays negligible.
inline GridFunction rand_smooth(const Grid& g, Rng& rng) {
    GridFunction f(g);
    for (int k = 0; k < 5; ++k) {
        const cplx a(rng.gaussian(), rng.gaussian());
        const cplx b(rng.gaussian(), rng.gaussian());
        for (int j = 0; j < g.point_count; ++j) {
            const double v = g.v[j];
            f[j] += a * std::exp(cplx(0.0, 0.35 * k * v)) + b * std::pow(v / 8.0, k);
        }
    }
    for (int j = 0; j < g.point_count; ++j) {
        const double v = g.v[j];
        f[j] *= std::exp(-v * v / 4.0);
    }
    return f;
}

}  // namespace bgk
