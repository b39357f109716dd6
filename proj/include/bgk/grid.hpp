#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bgk {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Shared uniform grid for the velocity variable v and the spectral variable
// lambda. Nodes v_j = -L + j*dx, j = 0..N-1; the right endpoint +L is not a
// node, so v = 0 is the node j = N/2 and every interior node has its mirror
// (v_{N-1-j} = -v_{j+1}).
struct Grid {
    double half_width;
    int point_count;
    double dx;
    std::vector<double> v;  // nodes
    std::vector<double> w;  // Maxwellian e^{-v^2}/sqrt(pi) at nodes

    explicit Grid(double L = 8.0, int N = 4096)
        : half_width(L), point_count(N), dx(2.0 * L / N), v(N), w(N) {
        if (N < 8 || (N & 1))
            throw std::invalid_argument("grid: point count must be even and >= 8");
        if (L <= 0.0)
            throw std::invalid_argument("grid: half width must be positive");
        const double rspi = 1.0 / std::sqrt(M_PI);
        for (int j = 0; j < N; ++j) {
            v[j] = -L + j * dx;
            w[j] = std::exp(-v[j] * v[j]) * rspi;
        }
    }

    bool same_as(const Grid& o) const {
        return half_width == o.half_width && point_count == o.point_count;
    }
};

// Complex samples on a Grid. Holds a reference to the grid it lives on; the
// grid must outlive the function. Mixed-grid arithmetic is refused.
struct GridFunction {
    const Grid* grid = nullptr;
    cvec values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g, cplx fill = 0.0)
        : grid(&g), values(g.point_count, fill) {}
    GridFunction(const Grid& g, cvec vals) : grid(&g), values(std::move(vals)) {
        if ((int)values.size() != g.point_count)
            throw std::invalid_argument("grid function: value count != grid size");
    }

    int size() const { return grid ? grid->point_count : 0; }
    cplx& operator[](int j) { return values[j]; }
    const cplx& operator[](int j) const { return values[j]; }
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.grid || !b.grid || !a.grid->same_as(*b.grid))
        throw std::invalid_argument("grid mismatch");
}

inline GridFunction ones(const Grid& g) { return GridFunction(g, cplx(1.0)); }

inline GridFunction coordinate(const Grid& g) {
    GridFunction f(g);
    for (int j = 0; j < g.point_count; ++j) f[j] = g.v[j];
    return f;
}

template <class F>
GridFunction sample(const Grid& g, F&& fn) {
    GridFunction f(g);
    for (int j = 0; j < g.point_count; ++j) f[j] = fn(g.v[j]);
    return f;
}

inline GridFunction operator+(GridFunction a, const GridFunction& b) {
    require_same_grid(a, b);
    for (size_t j = 0; j < a.values.size(); ++j) a.values[j] += b.values[j];
    return a;
}

inline GridFunction operator-(GridFunction a, const GridFunction& b) {
    require_same_grid(a, b);
    for (size_t j = 0; j < a.values.size(); ++j) a.values[j] -= b.values[j];
    return a;
}

inline GridFunction operator*(cplx c, GridFunction a) {
    for (auto& x : a.values) x *= c;
    return a;
}

// (f, g)_w = trapezoid of f * conj(g) * w. With nothing at the missing right
// endpoint and w(+-L) ~ 1e-28, the trapezoid rule is the plain Riemann sum.
inline cplx inner_w(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    const Grid& gr = *f.grid;
    cplx acc = 0.0;
    for (int j = 0; j < gr.point_count; ++j)
        acc += f.values[j] * std::conj(g.values[j]) * gr.w[j];
    return gr.dx * acc;
}

inline double l2w(const GridFunction& f) {
    const Grid& gr = *f.grid;
    double acc = 0.0;
    for (int j = 0; j < gr.point_count; ++j)
        acc += std::norm(f.values[j]) * gr.w[j];
    return std::sqrt(gr.dx * acc);
}

struct WeightedNorms {
    double l2w;
    double h1w;
};

// h1w adds the L2_w norm of the centered divided difference (one-sided at the
// two boundary nodes, where the weight is negligible anyway).
inline WeightedNorms norms(const GridFunction& f) {
    const Grid& gr = *f.grid;
    const int n = gr.point_count;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx d;
        if (j == 0)
            d = (f.values[1] - f.values[0]) / gr.dx;
        else if (j == n - 1)
            d = (f.values[n - 1] - f.values[n - 2]) / gr.dx;
        else
            d = (f.values[j + 1] - f.values[j - 1]) / (2.0 * gr.dx);
        acc += std::norm(d) * gr.w[j];
    }
    const double l2 = l2w(f);
    return WeightedNorms{l2, std::sqrt(l2 * l2 + gr.dx * acc)};
}

}  // namespace bgk
