#pragma once

#include <atomic>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "grid.hpp"

namespace bgk {

enum class Side { plus, minus };

inline std::atomic<long>& plemelj_leak_count() {
    static std::atomic<long> n{0};
    return n;
}

namespace detail {

// Discrete principal value on the uniform grid:
//
//   P.v. integral g(z)/(z - v_i) dz  ~  sum_m c_m g_{i+m},
//
// where the punctured trapezoid sum (c_m = 1/m, c_0 = 0) is corrected by the
// missing regular part at the puncture, dx * g'(v_i), with g' taken as the
// 4th-order centered difference. Folding that stencil into the kernel gives
// c_{+-1} = +-5/3, c_{+-2} = +-5/12, c_m = 1/m otherwise. The quadrature
// error is spectral in the grid for analytic weighted g plus O(dx^5 g^(5)).
//
// The sum is a linear correlation, evaluated as a zero-padded FFT
// convolution with kernel k_p = c_{-p}.
struct PvWorkspace {
    int n = 0;
    int nfft = 0;
    cvec kernel_fft;
    cvec buf;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    explicit PvWorkspace(int N) : n(N) {
        nfft = 1;
        while (nfft < 3 * N - 2) nfft <<= 1;
        buf.assign(nfft, 0.0);
        {
            // FFTW's planner is not thread-safe; executions are.
            static std::mutex planner_mutex;
            std::lock_guard<std::mutex> lock(planner_mutex);
            auto* b = reinterpret_cast<fftw_complex*>(buf.data());
            fwd = fftw_plan_dft_1d(nfft, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
            inv = fftw_plan_dft_1d(nfft, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        // kernel k_p = c_{-p}, p = -(N-1)..(N-1), stored at buf[p + N - 1]
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        for (int p = -(N - 1); p <= N - 1; ++p) {
            const int m = -p;
            double c;
            switch (m) {
                case 0: c = 0.0; break;
                case 1: c = 5.0 / 3.0; break;
                case -1: c = -5.0 / 3.0; break;
                case 2: c = 5.0 / 12.0; break;
                case -2: c = -5.0 / 12.0; break;
                default: c = 1.0 / m;
            }
            buf[p + N - 1] = c;
        }
        fftw_execute(fwd);
        kernel_fft = buf;
    }

    PvWorkspace(const PvWorkspace&) = delete;
    PvWorkspace& operator=(const PvWorkspace&) = delete;

    ~PvWorkspace() {
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }

    // out_i = sum_m c_m in_{i+m}
    void apply(const cvec& in, cvec& out) {
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        std::copy(in.begin(), in.end(), buf.begin());
        fftw_execute(fwd);
        for (int k = 0; k < nfft; ++k) buf[k] *= kernel_fft[k];
        fftw_execute(inv);
        out.resize(n);
        const double scale = 1.0 / nfft;
        for (int i = 0; i < n; ++i) out[i] = buf[n - 1 + i] * scale;
    }
};

inline PvWorkspace& pv_workspace(int N) {
    thread_local std::map<int, std::unique_ptr<PvWorkspace>> cache;
    auto& slot = cache[N];
    if (!slot) slot = std::make_unique<PvWorkspace>(N);
    return *slot;
}

}  // namespace detail

// P.v. integral of g(z)/(z - lambda) dz at every grid node.
inline GridFunction pv_transform(const GridFunction& g) {
    const Grid& gr = *g.grid;
    GridFunction out(gr);
    detail::pv_workspace(gr.point_count).apply(g.values, out.values);
    return out;
}

// Boundary values of the Cauchy transform from above (+) / below (-):
//   S_± g(lambda) = P.v. integral g(z)/(z-lambda) dz ± i pi g(lambda).
// The discrete kernel convention is pinned by the Dawson identity
// S_± w = -2 D ± i pi w, which the test suite checks directly.
inline GridFunction plemelj(const GridFunction& g, Side side) {
    const Grid& gr = *g.grid;
    double gmax = 0.0;
    for (const auto& x : g.values) gmax = std::max(gmax, std::abs(x));
    const double edge = std::max(std::abs(g.values.front()), std::abs(g.values.back()));
    if (gmax > 0.0 && edge > 1e-10 * gmax) {
        plemelj_leak_count()++;
        std::cerr << "plemelj: input does not decay at the grid edge ("
                  << edge / gmax << " of max); boundary leakage likely\n";
    }
    GridFunction out = pv_transform(g);
    const cplx jump = (side == Side::plus ? cplx(0.0, M_PI) : cplx(0.0, -M_PI));
    for (int j = 0; j < gr.point_count; ++j) out[j] += jump * g.values[j];
    return out;
}

}  // namespace bgk
