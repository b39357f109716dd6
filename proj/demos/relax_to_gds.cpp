// Propagate a random smooth state at one frequency and watch it relax onto
// the discrete-mode flow at the continuous-spectrum rate e^{-t}.
#include <cstdio>

#include "bgk/evolution.hpp"

int main() {
    const bgk::Grid g(8.0, 4096);
    const double xi = 0.8;
    bgk::Rng rng(1);
    const bgk::GridFunction f0 = bgk::rand_smooth(g, rng);

    std::printf("%6s %16s %16s\n", "t", "|f - g|", "e^{-t} scaled");
    double scale = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double t = 0.5 * k;
        const bgk::GridFunction f = bgk::propagate_spectral(xi, f0, t);
        const bgk::GridFunction ref = bgk::gds(xi, f0, t);
        double d2 = 0.0;
        for (int j = 0; j < g.point_count; ++j)
            d2 += std::norm(f.values[j] - ref.values[j]) * g.w[j];
        const double d = std::sqrt(g.dx * d2);
        if (k == 0) scale = d;
        std::printf("%6.2f %16.9e %16.9e\n", t, d, scale * std::exp(-t));
    }
    return 0;
}
