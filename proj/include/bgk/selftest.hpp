#pragma once

#include "evolution.hpp"

namespace bgk {

// One named measurement inside a criterion. sense says which side of the
// bound is a pass.
enum class Sense { below, above };

struct CheckItem {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    Sense sense = Sense::below;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    double measured = 0.0;   // representative check, worst one
    double tolerance = 0.0;
    Sense sense = Sense::below;
    bool pass = false;
    std::vector<CheckItem> checks;
};

struct SelftestOptions {
    double grid_l = 8.0;
    int grid_n = 4096;
    std::uint64_t seed = 12345;
    // Negative-control hook: scales the closed-form reference in the
    // boundary-identity check so the identity must stop holding.
    bool tamper_dawson = false;
};

namespace detail {

inline void add_below(std::vector<CheckItem>& cs, std::string name, double x, double tol) {
    cs.push_back({std::move(name), x, tol, Sense::below, x < tol});
}

inline void add_above(std::vector<CheckItem>& cs, std::string name, double x, double floor) {
    cs.push_back({std::move(name), x, floor, Sense::above, x > floor});
}

inline CriterionResult finish(int id, std::string name, std::vector<CheckItem> checks) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.checks = std::move(checks);
    r.pass = true;
    const CheckItem* rep = nullptr;
    double worst = -1.0;
    for (const auto& c : r.checks) {
        if (!c.pass && (rep == nullptr || rep->pass)) {
            rep = &c;  // first failing check wins the headline
            worst = 1e300;
        }
        if (rep == nullptr || (rep->pass && c.sense == Sense::below && c.bound > 0.0 &&
                               c.measured >= 0.0 && c.measured / c.bound > worst)) {
            rep = &c;
            worst = c.measured / c.bound;
        }
        r.pass = r.pass && c.pass;
    }
    if (rep == nullptr && !r.checks.empty()) rep = &r.checks.front();
    if (rep != nullptr) {
        r.measured = rep->measured;
        r.tolerance = rep->bound;
        r.sense = rep->sense;
    }
    return r;
}

// Boundary values of the Plemelj operator on the weight function against the
// closed form -2 D(lambda) +/- i pi w(lambda), interior nodes only.
inline std::vector<CheckItem> crit_plemelj_identity(const Grid& g, bool tamper) {
    const double scale = tamper ? 1.0 + 1e-6 : 1.0;
    GridFunction wf = sample(g, [](double v) { return cplx(weight(v)); });
    const GridFunction sp = plemelj(wf, Side::plus);
    const GridFunction sm = plemelj(wf, Side::minus);
    double worst = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        const double lam = g.v[j];
        if (std::abs(lam) > 4.0) continue;
        const cplx pvref = -2.0 * scale * dawson(lam);
        const cplx jump(0.0, M_PI * weight(lam));
        worst = std::max(worst, std::abs(sp.values[j] - (pvref + jump)));
        worst = std::max(worst, std::abs(sm.values[j] - (pvref - jump)));
    }
    std::vector<CheckItem> cs;
    add_below(cs, "boundary identity defect on |lambda| <= 4", worst, 1e-8);
    return cs;
}

inline std::vector<CheckItem> crit_eigencurve_routes(const Grid& g) {
    std::vector<CheckItem> cs;
    const std::vector<double> xis = {0.1, 0.3, 0.5, 0.8, 1.2, 1.6};
    double root_res = 0.0, impl_res = 0.0, series_gap = 0.0, bdry = 0.0;
    for (double xi : xis) {
        const double ls = *lambda_star(xi);
        root_res = std::max(root_res, std::abs(omega(cplx(ls), xi, g)));
        impl_res = std::max(impl_res, implicit_residual(ls, xi));
        if (xi <= 0.5) {
            // asymptotic series: best truncation over even orders
            double best = 1e300;
            for (int order = 2; order <= 20; order += 2)
                best = std::min(best, std::abs(lambda_star_series(xi, order) - ls));
            series_gap = std::max(series_gap, best);
        }
        bdry = std::max(bdry, std::abs(omega_real(-1.0 + 1e-8, xi) -
                                       (1.0 - std::sqrt(M_PI) / xi)));
    }
    add_below(cs, "root residual of the dispersion function", root_res, 1e-10);
    add_below(cs, "implicit erf-form residual", impl_res, 1e-10);
    add_below(cs, "series route gap at best truncation", series_gap, 1e-8);
    add_below(cs, "transport-ODE route deviation on [0.5, 1.5]",
              lambda_star_ode_check(0.5, 1.5), 1e-6);
    add_below(cs, "eigenvalue near the resonance endpoint", *lambda_star(1.772), -0.99);
    add_below(cs, "essential-line limit against 1 - sqrt(pi)/|xi|", bdry, 1e-4);
    return cs;
}

inline std::vector<CheckItem> crit_series_coefficients(const Grid&) {
    std::vector<CheckItem> cs;
    const std::vector<double> a = series_coefficients(3);  // a2, a4, a6
    add_below(cs, "quadratic coefficient is -1/2 exactly", std::abs(a[1] + 0.5), 1e-15);
    add_below(cs, "quartic coefficient is 1/4 exactly", std::abs(a[2] - 0.25), 1e-15);
    // degree-6 polynomial fit of the eigenvalue curve near zero, with the two
    // known leading coefficients pinned to their exact values
    const int npts = 25;
    Eigen::MatrixXd A(npts, 3);
    Eigen::VectorXd b(npts);
    for (int k = 0; k < npts; ++k) {
        const double s = 0.002 + (0.012 - 0.002) * k / (npts - 1);  // s = xi^2
        const double ls = *lambda_star(std::sqrt(s));
        A(k, 0) = 1.0;
        A(k, 1) = s;
        A(k, 2) = s * s;
        b(k) = (ls + 0.5 * s - 0.25 * s * s) / (s * s * s);
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    add_below(cs, "sixth coefficient from the pinned degree-6 fit", std::abs(c(0) + 0.5),
              1e-4);
    return cs;
}

inline std::vector<CheckItem> crit_mode_projector(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    const GridFunction one = ones(g);
    double eig = 0.0, mom = 0.0, pairing = 0.0, idem = 0.0;
    for (double xi : {-1.5, -1.0, -0.4, 0.4, 1.0, 1.5}) {
        const Mode m = mode(g, xi);
        GridFunction d = apply_L(xi, m.e1);
        for (int j = 0; j < g.point_count; ++j) d[j] -= m.lambda * m.e1.values[j];
        eig = std::max(eig, l2w(d));
        mom = std::max(mom, std::abs(inner_w(m.e1, one) - 1.0));
        pairing = std::max(pairing, std::abs(inner_w(m.e1, m.e1bar) - m.omega_prime));
        for (int k = 0; k < 3; ++k) {
            const GridFunction f = rand_smooth(g, rng);
            const GridFunction p = project(xi, f);
            GridFunction pp = project(xi, p);
            for (int j = 0; j < g.point_count; ++j) pp[j] -= p.values[j];
            idem = std::max(idem, l2w(pp) / l2w(f));
        }
    }
    add_below(cs, "eigenrelation residual", eig, 1e-8);
    add_below(cs, "unit moment of the eigenmode", mom, 1e-8);
    add_below(cs, "mode pairing equals the dispersion slope", pairing, 1e-8);
    add_below(cs, "projector idempotence", idem, 1e-8);
    return cs;
}

inline std::vector<CheckItem> crit_resolvent(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    const struct {
        cplx lambda;
        double xi;
    } pts[] = {{cplx(0.7, 0.0), 0.4},
               {cplx(0.5, 0.6), 1.0},
               {cplx(-0.3, 0.0), 1.5},
               {cplx(-2.0, 0.8), 2.5},
               {cplx(2.0, 0.0), 0.0}};
    double resid = 0.0;
    for (const auto& p : pts) {
        const GridFunction f = rand_smooth(g, rng);
        const GridFunction r = resolvent_apply(p.lambda, p.xi, f);
        GridFunction d = apply_L(p.xi, r);
        for (int j = 0; j < g.point_count; ++j)
            d[j] -= p.lambda * r.values[j] + f.values[j];
        resid = std::max(resid, l2w(d) / l2w(f));
    }
    add_below(cs, "defining residual of the resolvent", resid, 1e-8);

    {  // first resolvent identity at xi = 1
        const cplx l1(0.7, 0.0), l2(0.5, 0.6);
        const GridFunction f = rand_smooth(g, rng);
        const GridFunction r1 = resolvent_apply(l1, 1.0, f);
        const GridFunction r2 = resolvent_apply(l2, 1.0, f);
        const GridFunction r12 = resolvent_apply(l1, 1.0, r2);
        GridFunction d(g);
        for (int j = 0; j < g.point_count; ++j)
            d[j] = r1.values[j] - r2.values[j] - (l1 - l2) * r12.values[j];
        add_below(cs, "first resolvent identity", l2w(d) / l2w(f), 1e-7);
    }

    {  // xi = 0 closed form and the constant-state value
        const double lam = 2.0;
        const GridFunction f = rand_smooth(g, rng);
        const GridFunction r = resolvent_apply(cplx(lam), 0.0, f);
        const cplx m = inner_w(f, ones(g));
        GridFunction d(g);
        for (int j = 0; j < g.point_count; ++j) {
            const cplx closed = (m - f.values[j]) / (1.0 + lam) - m / lam;
            d[j] = r.values[j] - closed;
        }
        add_below(cs, "zero-frequency closed form", l2w(d) / l2w(f), 1e-8);
        const GridFunction rone = resolvent_apply(cplx(lam), 0.0, ones(g));
        GridFunction e(g);
        for (int j = 0; j < g.point_count; ++j) e[j] = rone.values[j] + 0.5;
        add_below(cs, "resolvent of the constant state", l2w(e), 1e-10);
    }
    return cs;
}

inline std::vector<CheckItem> crit_parseval(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    double par = 0.0, rec = 0.0;
    for (double xi : {0.0, 0.25, -0.25, 0.8, -0.8, 1.5, -1.5, 2.5, -2.5}) {
        for (int k = 0; k < 20; ++k) {
            const GridFunction f = rand_smooth(g, rng);
            const GridFunction h = rand_smooth(g, rng);
            const cplx lhs = parseval_pairing(xi, f, h);
            par = std::max(par,
                           std::abs(lhs - inner_w(f, h)) / (l2w(f) * l2w(h)));
            const GridFunction back = reconstruct(xi, decompose(xi, f));
            GridFunction d(g);
            for (int j = 0; j < g.point_count; ++j) d[j] = back.values[j] - f.values[j];
            rec = std::max(rec, l2w(d) / l2w(f));
        }
    }
    add_below(cs, "sesquilinear identity over random pairs", par, 1e-6);
    add_below(cs, "round-trip reconstruction defect", rec, 1e-6);
    return cs;
}

inline std::vector<CheckItem> crit_diagonalization(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    double worst = 0.0;
    for (double xi : {0.4, 1.0, 2.5}) {
        for (int k = 0; k < 3; ++k) {
            const GridFunction f = rand_smooth(g, rng);
            const GridFunction bf = forward_B(xi, f);
            const GridFunction bl = forward_B(xi, apply_L(xi, f));
            GridFunction d(g);
            for (int j = 0; j < g.point_count; ++j)
                d[j] = bl.values[j] - (-1.0 - cplx(0.0, xi * g.v[j])) * bf.values[j];
            worst = std::max(worst, l2w(d) / l2w(bf));
        }
    }
    add_below(cs, "intertwining with the frequency multiplier", worst, 1e-7);
    return cs;
}

inline std::vector<CheckItem> crit_cross_oracle(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    const std::vector<double> times = {0.5, 1.0, 2.0, 5.0};
    double worst = 0.0;
    for (double xi : {0.25, 0.8, 1.5, 2.5}) {
        const GridFunction f0 = rand_smooth(g, rng);
        GridFunction carried = f0;
        double tprev = 0.0;
        for (double t : times) {
            carried = propagate_direct(xi, carried, t - tprev, 0.01).state;
            tprev = t;
            const GridFunction fs = propagate_spectral(xi, f0, t);
            GridFunction d(g);
            for (int j = 0; j < g.point_count; ++j)
                d[j] = fs.values[j] - carried.values[j];
            worst = std::max(worst, l2w(d));
        }
    }
    add_below(cs, "spectral vs time-stepped propagator", worst, 1e-4);
    return cs;
}

inline std::vector<CheckItem> crit_gds_decay(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    Rng rng(seed);
    // continuous amplitude of the evolved state decays exactly like e^{-t}
    double amp_defect = 0.0;
    for (double xi : {0.4, 0.8, 1.2}) {
        const GridFunction f0 = rand_smooth(g, rng);
        const double n0 = l2w(forward_B(xi, f0));
        for (double t : {0.5, 1.0, 2.0, 3.0}) {
            const GridFunction f = propagate_spectral(xi, f0, t);
            amp_defect = std::max(
                amp_defect, std::abs(l2w(forward_B(xi, f)) - std::exp(-t) * n0) / n0);
        }
    }
    add_below(cs, "continuous-amplitude norm decay defect", amp_defect, 1e-8);

    {  // linear-in-v data: the difference from its diffusive shadow dies at e^{-t}
        EvolutionConfig cfg;
        cfg.xi_list = {0.8};
        for (double t = 2.0; t <= 6.0 + 1e-9; t += 0.5) cfg.times.push_back(t);
        cfg.method = Method::both;
        const DecayReport rep = decay_report(
            g, cfg, [](const Grid& gg, double) { return coordinate(gg); });
        add_below(cs, "fitted difference decay rate against -1",
                  std::abs(rep.l2.rate + 1.0), 0.01);
    }

    {  // truncated reference, aggregated over a frequency band
        EvolutionConfig cfg;
        for (double xi = -1.5; xi <= 1.5 + 1e-9; xi += 0.25) cfg.xi_list.push_back(xi);
        for (double t = 3.0; t <= 6.0 + 1e-9; t += 0.5) cfg.times.push_back(t);
        cfg.method = Method::spectral;
        cfg.xi0 = 1.0;
        Rng rng2(seed + 17);
        const DecayReport rep = decay_report(
            g, cfg, [&rng2](const Grid& gg, double) { return rand_smooth(gg, rng2); });
        add_below(cs, "aggregate rate against the cutoff eigenvalue bound", rep.l2.rate,
                  rep.reference_rate + rep.rate_tolerance);
    }
    return cs;
}

inline std::vector<CheckItem> crit_contraction(const Grid& g, std::uint64_t seed) {
    std::vector<CheckItem> cs;
    const ContractionReport rep =
        contraction_check(g, {0.0, 0.4, 0.8, 1.5, 2.5}, {0.5, 1.0, 3.0}, 3, seed);
    add_below(cs, "largest norm ratio across the sample", rep.max_ratio, 1.0 + 1e-6);
    return cs;
}

inline std::vector<CheckItem> crit_chapman(const Grid&) {
    std::vector<CheckItem> cs;
    std::vector<double> ts;
    for (double t = 5.0; t <= 50.0 + 1e-9; t += 2.5) ts.push_back(t);
    const ChapmanReport rep = chapman_enskog_gap(ts);
    add_below(cs, "log-log gap slope against -1", std::abs(rep.slope + 1.0), 0.15);
    add_below(cs, "variation of t * gap over the window", rep.tgap_range_over_mean, 0.25);
    return cs;
}

inline std::vector<CheckItem> crit_pde_structure(const Grid&) {
    std::vector<CheckItem> cs;
    double heat = std::max(heat_residual(0.5, 1.0), heat_residual(2.0, 0.25));
    double xiode = std::max({omega_xi_ode_residual(0.5, 1.0),
                             omega_xi_ode_residual(0.0, 0.8),
                             omega_xi_ode_residual(1.2, 1.3)});
    add_below(cs, "heat-equation residual of the dispersion function", heat, 1e-4);
    add_below(cs, "frequency-ODE residual of the dispersion function", xiode, 1e-4);
    const double h0 = 4e-3, h1 = 2e-3, h2 = 1e-3;
    const double hr0 = heat_residual(0.5, 1.0, h0) / heat_residual(0.5, 1.0, h1);
    const double hr1 = heat_residual(0.5, 1.0, h1) / heat_residual(0.5, 1.0, h2);
    const double xr0 =
        omega_xi_ode_residual(0.5, 1.0, h0) / omega_xi_ode_residual(0.5, 1.0, h1);
    const double xr1 =
        omega_xi_ode_residual(0.5, 1.0, h1) / omega_xi_ode_residual(0.5, 1.0, h2);
    const double dev =
        std::max({std::abs(hr0 - 4.0), std::abs(hr1 - 4.0), std::abs(xr0 - 4.0),
                  std::abs(xr1 - 4.0)});
    add_below(cs, "second-order step-halving ratio against 4", dev, 0.7);
    return cs;
}

inline std::vector<CheckItem> crit_resolution_control(const SelftestOptions& opt) {
    // the same protocols must stop passing on a quarter-resolution grid
    std::vector<CheckItem> cs;
    Grid coarse(opt.grid_l, 256);
    const auto ident = crit_plemelj_identity(coarse, false);
    add_above(cs, "boundary identity defect at n = 256 exceeds its tolerance",
              ident.front().measured, 1e-8);
    const auto par = crit_parseval(coarse, opt.seed);
    const double worst = std::max(par[0].measured, par[1].measured);
    add_above(cs, "expansion defects at n = 256 exceed their tolerance", worst, 1e-6);
    return cs;
}

}  // namespace detail

inline CriterionResult run_criterion(int id, const Grid& g, const SelftestOptions& opt) {
    using namespace detail;
    switch (id) {
        case 1:
            return finish(1, "boundary identity of the principal-value operator",
                          crit_plemelj_identity(g, opt.tamper_dawson));
        case 2:
            return finish(2, "discrete eigenvalue, four routes and endpoint",
                          crit_eigencurve_routes(g));
        case 3:
            return finish(3, "small-frequency series coefficients",
                          crit_series_coefficients(g));
        case 4:
            return finish(4, "eigenmode relations and spectral projector",
                          crit_mode_projector(g, opt.seed + 4));
        case 5:
            return finish(5, "resolvent residual and identities",
                          crit_resolvent(g, opt.seed + 5));
        case 6:
            return finish(6, "expansion completeness and pairing identity",
                          crit_parseval(g, opt.seed + 6));
        case 7:
            return finish(7, "transform diagonalizes the generator",
                          crit_diagonalization(g, opt.seed + 7));
        case 8:
            return finish(8, "propagator cross-check", crit_cross_oracle(g, opt.seed + 8));
        case 9:
            return finish(9, "relaxation toward the macroscopic mode",
                          crit_gds_decay(g, opt.seed + 9));
        case 10:
            return finish(10, "semigroup contraction", crit_contraction(g, opt.seed + 10));
        case 11:
            return finish(11, "diffusion-approximation gap over [5, 50]",
                          crit_chapman(g));
        case 12:
            return finish(12, "structural PDE and ODE residuals",
                          crit_pde_structure(g));
        case 13:
            return finish(13, "coarse-grid negative control",
                          crit_resolution_control(opt));
        default:
            throw config_error("run_criterion: id out of range");
    }
}

inline std::vector<CriterionResult> run_selftest(const SelftestOptions& opt) {
    Grid g(opt.grid_l, opt.grid_n);
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 13; ++id) out.push_back(run_criterion(id, g, opt));
    return out;
}

}  // namespace bgk
