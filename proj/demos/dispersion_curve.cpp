// Sweep the discrete eigenvalue curve and compare it with its diffusion
// approximation -xi^2/2.
#include <cstdio>

#include "bgk/dispersion.hpp"

int main() {
    std::printf("%8s %16s %16s %16s\n", "xi", "lambda_star", "omega_prime",
                "-xi^2/2");
    for (int k = 0; k <= 35; ++k) {
        const double xi = 0.05 * k;
        const bgk::DispersionPoint p = bgk::dispersion_point(xi);
        if (!p.lambda_star) {
            std::printf("%8.2f %16s\n", xi, "none");
            continue;
        }
        std::printf("%8.2f %16.10f %16.10f %16.10f\n", xi, *p.lambda_star,
                    p.omega_prime, -0.5 * xi * xi);
    }
    return 0;
}
