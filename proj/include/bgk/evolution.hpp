#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gft.hpp"
#include "rng.hpp"

namespace bgk {

enum class Method { spectral, direct, both };

namespace detail {

// intercept + slope of the least-squares line through (x, y)
inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = x[i];
        b(i) = y[i];
    }
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    return {c(0), c(1)};
}

inline double rms_line_residual(const std::vector<double>& x, const std::vector<double>& y,
                                double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - a - b * x[i];
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(x.size()));
}

inline void rk4_step(double xi, GridFunction& f, double h) {
    const Grid& g = *f.grid;
    GridFunction k1 = apply_L(xi, f);
    GridFunction s(g);
    for (int j = 0; j < g.point_count; ++j) s[j] = f.values[j] + 0.5 * h * k1.values[j];
    GridFunction k2 = apply_L(xi, s);
    for (int j = 0; j < g.point_count; ++j) s[j] = f.values[j] + 0.5 * h * k2.values[j];
    GridFunction k3 = apply_L(xi, s);
    for (int j = 0; j < g.point_count; ++j) s[j] = f.values[j] + h * k3.values[j];
    GridFunction k4 = apply_L(xi, s);
    for (int j = 0; j < g.point_count; ++j)
        f[j] += h / 6.0 *
                (k1.values[j] + 2.0 * k2.values[j] + 2.0 * k3.values[j] + k4.values[j]);
}

inline GridFunction rk4_run(double xi, GridFunction f, double t, int steps) {
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) rk4_step(xi, f, h);
    return f;
}

}  // namespace detail

// Spectral propagator: damp the continuous amplitude by e^{-(1+i xi lambda) t}
// and the discrete coefficient by e^{lambda* t}, then map back.
inline GridFunction propagate_spectral(double xi, const GridFunction& f0, double t,
                                       bool allow_resonance = false) {
    if (t < 0.0) throw config_error("propagate_spectral: negative time");
    const Grid& g = *f0.grid;
    if (xi == 0.0) {
        const cplx m = inner_w(f0, ones(g));
        const double e = std::exp(-t);
        GridFunction out(g);
        for (int j = 0; j < g.point_count; ++j)
            out[j] = e * (f0.values[j] - m) + m;
        return out;
    }
    if (!allow_resonance && in_resonance_zone(xi))
        throw resonance_error("propagate_spectral: xi within the resonance exclusion zone");
    GridFunction amp = forward_B(xi, f0);
    const double e = std::exp(-t);
    for (int j = 0; j < g.point_count; ++j)
        amp[j] *= e * std::exp(cplx(0.0, -xi * g.v[j] * t));
    GridFunction out = adjoint_U(xi, amp, allow_resonance);
    if (std::abs(xi) < resonance_xi && !in_resonance_zone(xi)) {
        Mode m = mode(g, xi);
        const cplx mu = inner_w(f0, m.e1bar) / m.omega_prime;
        const cplx d = std::exp(m.lambda * t) * mu;
        for (int j = 0; j < g.point_count; ++j) out[j] += d * m.e1[j];
    }
    return out;
}

// Classical RK4 on f' = L f, with a half-step Richardson error estimate. The
// returned state is the half-step run. Estimates above 1e-6 per unit time are
// rejected outright rather than reported as trustworthy.
struct DirectResult {
    GridFunction state;
    double richardson = 0.0;
    int steps = 0;
};

inline DirectResult propagate_direct(double xi, const GridFunction& f0, double t,
                                     double dt = 0.01) {
    if (t < 0.0) throw config_error("propagate_direct: negative time");
    if (dt <= 0.0) throw config_error("propagate_direct: nonpositive dt");
    if (t == 0.0) return {f0, 0.0, 0};
    const int n = std::max(1, static_cast<int>(std::lround(t / dt)));
    GridFunction coarse = detail::rk4_run(xi, f0, t, n);
    GridFunction fine = detail::rk4_run(xi, f0, t, 2 * n);
    double diff2 = 0.0;
    for (int j = 0; j < f0.grid->point_count; ++j) {
        const cplx d = coarse.values[j] - fine.values[j];
        diff2 += std::norm(d) * f0.grid->w[j];
    }
    const double est = std::sqrt(f0.grid->dx * diff2) / 15.0;
    if (est / t > 1e-6)
        throw tolerance_error("propagate_direct: step-halving estimate exceeds 1e-6 per unit time");
    return {std::move(fine), est, n};
}

// Growing-diffusive-solution reference: the discrete mode alone,
//   g(t) = e^{lambda*(xi) t} mu0 e1,   mu0 = (f0, e1bar)_w / omega',
// identically zero past the resonance where no discrete mode exists.
inline GridFunction gds(double xi, const GridFunction& f0, double t) {
    if (in_resonance_zone(xi))
        throw resonance_error("gds: xi within the resonance exclusion zone");
    const Grid& g = *f0.grid;
    if (std::abs(xi) > resonance_xi) return GridFunction(g, cplx(0.0));
    Mode m = mode(g, xi);
    const cplx mu = inner_w(f0, m.e1bar) / m.omega_prime;
    const cplx d = std::exp(m.lambda * t) * mu;
    GridFunction out(g);
    for (int j = 0; j < g.point_count; ++j) out[j] = d * m.e1[j];
    return out;
}

// Frequency-truncated variant: keep the reference only on |xi| <= xi0.
inline GridFunction gds_truncated(double xi, const GridFunction& f0, double t, double xi0) {
    if (!(xi0 > 0.0 && xi0 < resonance_xi))
        throw config_error("gds_truncated: cutoff must lie in (0, sqrt(pi))");
    if (std::abs(xi) <= xi0) return gds(xi, f0, t);
    return GridFunction(*f0.grid, cplx(0.0));
}

struct DecayCurve {
    std::vector<double> value;
    double rate = 0.0;
    double fit_residual = 0.0;
};

struct EvolutionConfig {
    std::vector<double> xi_list;
    std::vector<double> times;
    double dt = 0.01;
    Method method = Method::both;
    double xi0 = 0.0;  // > 0 switches the reference to gds_truncated(xi0)
};

struct DecayReport {
    std::vector<double> times;
    std::vector<double> xi;
    std::vector<std::vector<double>> per_xi;  // [ixi][it]  ||f - g||_{L2_w}
    DecayCurve l2, h1, hm1;                   // xi-aggregated difference norms
    double window_start = 0.0, window_end = 0.0;
    bool monotone_on_window = true;
    double reference_rate = 0.0, rate_tolerance = 0.0;
    double propagator_gap = 0.0;   // method == both only
    double richardson_max = 0.0;   // direct runs only
};

// Propagate each xi, subtract the reference, aggregate over xi with the
// Sobolev proxy weights (1 + xi^2)^{0, +1, -1} on squared norms, and fit the
// decay rate of each aggregate on the tail window [T/2, T] from log-norms.
inline DecayReport decay_report(
    const Grid& g, const EvolutionConfig& cfg,
    const std::function<GridFunction(const Grid&, double)>& initial) {
    if (cfg.xi_list.empty() || cfg.times.empty())
        throw config_error("decay_report: empty xi or time list");
    if (!std::is_sorted(cfg.times.begin(), cfg.times.end()) ||
        !std::is_sorted(cfg.xi_list.begin(), cfg.xi_list.end()))
        throw config_error("decay_report: xi and time lists must be sorted ascending");
    if (cfg.times.front() < 0.0)
        throw config_error("decay_report: negative time");

    DecayReport rep;
    rep.times = cfg.times;
    rep.xi = cfg.xi_list;
    const int nxi = static_cast<int>(cfg.xi_list.size());
    const int nt = static_cast<int>(cfg.times.size());
    rep.per_xi.assign(nxi, std::vector<double>(nt, 0.0));

    for (int ix = 0; ix < nxi; ++ix) {
        const double xi = cfg.xi_list[ix];
        const GridFunction f0 = initial(g, xi);
        GridFunction carried = f0;  // direct runs step segment to segment
        double tprev = 0.0;
        for (int it = 0; it < nt; ++it) {
            const double t = cfg.times[it];
            GridFunction f(g);
            if (cfg.method == Method::spectral) {
                f = propagate_spectral(xi, f0, t);
            } else {
                DirectResult dr = propagate_direct(xi, carried, t - tprev, cfg.dt);
                rep.richardson_max = std::max(rep.richardson_max, dr.richardson);
                carried = std::move(dr.state);
                tprev = t;
                f = carried;
                if (cfg.method == Method::both) {
                    const GridFunction fs = propagate_spectral(xi, f0, t);
                    double d2 = 0.0;
                    for (int j = 0; j < g.point_count; ++j)
                        d2 += std::norm(fs.values[j] - f.values[j]) * g.w[j];
                    rep.propagator_gap =
                        std::max(rep.propagator_gap, std::sqrt(g.dx * d2));
                }
            }
            const GridFunction ref = cfg.xi0 > 0.0 ? gds_truncated(xi, f0, t, cfg.xi0)
                                                   : gds(xi, f0, t);
            double d2 = 0.0;
            for (int j = 0; j < g.point_count; ++j)
                d2 += std::norm(f.values[j] - ref.values[j]) * g.w[j];
            rep.per_xi[ix][it] = std::sqrt(g.dx * d2);
        }
    }

    // aggregate: trapezoid in xi of u(xi) ||.||^2; a single xi keeps its own
    // weighted norm with no measure factor
    auto aggregate = [&](double expo) {
        std::vector<double> out(nt);
        for (int it = 0; it < nt; ++it) {
            double s = 0.0;
            if (nxi == 1) {
                const double u = std::pow(1.0 + cfg.xi_list[0] * cfg.xi_list[0], expo);
                s = u * rep.per_xi[0][it] * rep.per_xi[0][it];
            } else {
                for (int ix = 0; ix + 1 < nxi; ++ix) {
                    const double u0 =
                        std::pow(1.0 + cfg.xi_list[ix] * cfg.xi_list[ix], expo);
                    const double u1 =
                        std::pow(1.0 + cfg.xi_list[ix + 1] * cfg.xi_list[ix + 1], expo);
                    const double a = u0 * rep.per_xi[ix][it] * rep.per_xi[ix][it];
                    const double b = u1 * rep.per_xi[ix + 1][it] * rep.per_xi[ix + 1][it];
                    s += 0.5 * (a + b) * (cfg.xi_list[ix + 1] - cfg.xi_list[ix]);
                }
            }
            out[it] = std::sqrt(s);
        }
        return out;
    };
    rep.l2.value = aggregate(0.0);
    rep.h1.value = aggregate(1.0);
    rep.hm1.value = aggregate(-1.0);

    const double T = cfg.times.back();
    rep.window_start = T / 2.0;
    rep.window_end = T;
    std::vector<double> tw;
    std::vector<int> iw;
    for (int it = 0; it < nt; ++it)
        if (cfg.times[it] >= rep.window_start - 1e-12) {
            tw.push_back(cfg.times[it]);
            iw.push_back(it);
        }
    if (tw.size() < 5)
        throw config_error("decay_report: fewer than 5 samples in the fit window");

    auto fit_curve = [&](DecayCurve& c) {
        std::vector<double> ly(tw.size());
        for (std::size_t k = 0; k < iw.size(); ++k) {
            const double v = c.value[iw[k]];
            if (!(v > 0.0))
                throw tolerance_error("decay_report: vanishing difference norm in fit window");
            ly[k] = std::log(v);
        }
        auto [a, b] = detail::fit_line(tw, ly);
        c.rate = b;
        c.fit_residual = detail::rms_line_residual(tw, ly, a, b);
    };
    fit_curve(rep.l2);
    fit_curve(rep.h1);
    fit_curve(rep.hm1);

    for (std::size_t k = 0; k + 1 < iw.size(); ++k)
        if (rep.l2.value[iw[k + 1]] > rep.l2.value[iw[k]] * (1.0 + 1e-12))
            rep.monotone_on_window = false;

    if (cfg.xi0 > 0.0) {
        rep.reference_rate = *lambda_star(cfg.xi0);
        rep.rate_tolerance = 0.05;
    } else {
        rep.reference_rate = -1.0;
        rep.rate_tolerance = 0.01;
    }
    return rep;
}

struct ContractionSample {
    double xi = 0.0, t = 0.0, ratio = 0.0;
    std::string label;
};

struct ContractionReport {
    double max_ratio = 0.0;
    std::vector<ContractionSample> samples;
};

// Norm ratios ||e^{tL} f|| / ||f|| under the direct propagator; the semigroup
// is a contraction, so every ratio must stay at or below one up to round-off.
inline ContractionReport contraction_check(const Grid& g,
                                           const std::vector<double>& xi_list,
                                           const std::vector<double>& t_list,
                                           int n_random, std::uint64_t seed,
                                           double dt = 0.01) {
    ContractionReport rep;
    Rng rng(seed);
    std::vector<std::pair<std::string, GridFunction>> pool;
    pool.emplace_back("const", ones(g));
    pool.emplace_back("linear", coordinate(g));
    for (int k = 0; k < n_random; ++k)
        pool.emplace_back("random" + std::to_string(k), rand_smooth(g, rng));
    for (double xi : xi_list)
        for (double t : t_list)
            for (const auto& [label, f0] : pool) {
                const double n0 = l2w(f0);
                const GridFunction f = propagate_direct(xi, f0, t, dt).state;
                ContractionSample s{xi, t, l2w(f) / n0, label};
                rep.max_ratio = std::max(rep.max_ratio, s.ratio);
                rep.samples.push_back(std::move(s));
            }
    return rep;
}

struct ChapmanReport {
    std::vector<double> t, gap, t_gap;
    double slope = 0.0;                 // log-log fit over the provided times
    double tgap_range_over_mean = 0.0;  // spread of t * gap over the list
};

// Sup over frequencies of |e^{lambda*(xi) t} - e^{-xi^2 t / 2}|: how far the
// discrete-mode decay is from its diffusion approximation, as a function of
// time. Scalar in the frequency variable only; no velocity grid involved.
inline ChapmanReport chapman_enskog_gap(const std::vector<double>& t_list) {
    if (t_list.empty()) throw config_error("chapman_enskog_gap: empty time list");
    const double step = 0.002;
    std::vector<double> lam, half;
    for (double xi = step; xi < resonance_xi - 1e-9; xi += step) {
        lam.push_back(*lambda_star(xi));
        half.push_back(-0.5 * xi * xi);
    }
    ChapmanReport rep;
    rep.t = t_list;
    for (double t : t_list) {
        if (t <= 0.0) throw config_error("chapman_enskog_gap: times must be positive");
        double gmax = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j)
            gmax = std::max(gmax, std::abs(std::exp(lam[j] * t) - std::exp(half[j] * t)));
        rep.gap.push_back(gmax);
        rep.t_gap.push_back(t * gmax);
    }
    if (t_list.size() >= 2) {
        std::vector<double> lx(t_list.size()), ly(t_list.size());
        for (std::size_t i = 0; i < t_list.size(); ++i) {
            lx[i] = std::log(t_list[i]);
            ly[i] = std::log(rep.gap[i]);
        }
        rep.slope = detail::fit_line(lx, ly).second;
    }
    const auto [mn, mx] = std::minmax_element(rep.t_gap.begin(), rep.t_gap.end());
    double mean = 0.0;
    for (double v : rep.t_gap) mean += v;
    mean /= static_cast<double>(rep.t_gap.size());
    if (mean > 0.0) rep.tgap_range_over_mean = (*mx - *mn) / mean;
    return rep;
}

// Minimal space-grid front end: a periodic x-profile is split into discrete
// Fourier modes, each mode is propagated at its own frequency, and the field
// is resynthesized. The discrete Parseval identity between the two layers is
// reported as a consistency defect.
struct XGridField {
    double x_length = 2.0 * M_PI;
    std::vector<GridFunction> slices;  // one velocity profile per x node
};

struct XEvolveResult {
    XGridField field;
    std::vector<double> xi;  // mode frequencies, DFT order
    double parseval_defect = 0.0;
};

inline XEvolveResult propagate_xgrid(const XGridField& f0, double t, Method method,
                                     double dt = 0.01, bool allow_resonance = false) {
    const int m = static_cast<int>(f0.slices.size());
    if (m < 2) throw config_error("propagate_xgrid: need at least two x nodes");
    const Grid& g = *f0.slices[0].grid;
    for (const auto& s : f0.slices) require_same_grid(s, f0.slices[0]);

    XEvolveResult res;
    res.field.x_length = f0.x_length;
    res.field.slices.assign(m, GridFunction(g));
    std::vector<GridFunction> modes(m, GridFunction(g));
    for (int k = 0; k < m; ++k) {
        const int kk = k <= m / 2 ? k : k - m;  // signed mode index
        res.xi.push_back(2.0 * M_PI * kk / f0.x_length);
        for (int x = 0; x < m; ++x) {
            const cplx ph = std::exp(cplx(0.0, -2.0 * M_PI * k * x / m));
            for (int j = 0; j < g.point_count; ++j)
                modes[k][j] += ph * f0.slices[x].values[j] / static_cast<double>(m);
        }
    }

    double sum_modes = 0.0;
    for (int k = 0; k < m; ++k) {
        const double xi = res.xi[k];
        if (method == Method::direct)
            modes[k] = propagate_direct(xi, modes[k], t, dt).state;
        else
            modes[k] = propagate_spectral(xi, modes[k], t, allow_resonance);
        sum_modes += l2w(modes[k]) * l2w(modes[k]);
    }

    double sum_x = 0.0;
    for (int x = 0; x < m; ++x) {
        for (int k = 0; k < m; ++k) {
            const cplx ph = std::exp(cplx(0.0, 2.0 * M_PI * k * x / m));
            for (int j = 0; j < g.point_count; ++j)
                res.field.slices[x][j] += ph * modes[k].values[j];
        }
        const double n = l2w(res.field.slices[x]);
        sum_x += n * n / static_cast<double>(m);
    }
    res.parseval_defect =
        std::abs(sum_x - sum_modes) / std::max(1e-300, std::abs(sum_modes));
    return res;
}

}  // namespace bgk
