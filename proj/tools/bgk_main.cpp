#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgk/config.hpp"
#include "bgk/io.hpp"
#include "bgk/selftest.hpp"

namespace {

using namespace bgk;

const char* method_name(Method m) {
    switch (m) {
        case Method::spectral: return "spectral";
        case Method::direct: return "direct";
        default: return "both";
    }
}

nlohmann::json config_echo(const RunConfig& c) {
    return {{"grid_l", c.grid_l},
            {"grid_n", c.grid_n},
            {"xi", c.xi_list},
            {"times", c.times},
            {"dt", c.dt},
            {"method", method_name(c.method)},
            {"xi0", c.xi0},
            {"out", c.out_dir},
            {"format", c.format},
            {"seed", c.seed},
            {"experimental_resonance", c.experimental_resonance}};
}

void emit(const RunConfig& cfg, const std::string& stem, const Table& t) {
    ensure_dir(cfg.out_dir);
    const std::string base = cfg.out_dir + "/" + stem;
    if (cfg.format == "csv") {
        write_csv(base + ".csv", t);
        std::cout << "wrote " << base << ".csv (" << t.rows.size() << " rows)\n";
        return;
    }
    nlohmann::json j;
    j["config"] = config_echo(cfg);
    j["comments"] = t.comments;
    j["columns"] = t.header;
    auto rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) {
            if (c.numeric)
                r.push_back(c.num);
            else
                r.push_back(c.text);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    std::ofstream out(base + ".json", std::ios::binary);
    if (!out) throw internal_error("cannot open for writing: " + base + ".json");
    out << j.dump(2) << "\n";
    std::cout << "wrote " << base << ".json (" << t.rows.size() << " rows)\n";
}

std::vector<double> int_range(int k0, int k1, double scale) {
    std::vector<double> out;
    for (int k = k0; k <= k1; ++k) out.push_back(k * scale);
    return out;
}

int cmd_dispersion(const RunConfig& cfg) {
    const std::vector<double> xis =
        cfg.xi_list.empty() ? int_range(-34, 34, 0.05) : cfg.xi_list;
    Table t;
    t.comments = {
        "frequency sweep of the discrete eigenvalue and its diagnostics",
        "grid_l=" + fmt_sci(cfg.grid_l) + " grid_n=" + std::to_string(cfg.grid_n),
        "lambda_star: root of the dispersion function in (-1, 0]; empty when none",
        "omega_prime: slope of the dispersion function at the root",
        "root_residual: |omega(lambda_star, xi)|",
        "implicit_residual: scalar erf-form equation residual at the root",
        "series_gap_order10: |order-10 series - root| for |xi| <= 0.5, else empty",
        "branch: discrete | boundary (within 1e-6 of sqrt(pi)) | none",
    };
    t.header = {"xi",
                "lambda_star",
                "omega_prime",
                "root_residual",
                "implicit_residual",
                "series_gap_order10",
                "branch"};
    double worst_res = 0.0;
    for (double xi : xis) {
        const DispersionPoint p = dispersion_point(xi);
        std::vector<Cell> row;
        row.emplace_back(xi);
        if (p.lambda_star) {
            row.emplace_back(*p.lambda_star);
            row.emplace_back(p.omega_prime);
            row.emplace_back(p.residual);
            row.emplace_back(implicit_residual(*p.lambda_star, xi));
            if (std::abs(xi) <= series_xi_max)
                row.emplace_back(std::abs(lambda_star_series(xi, 10) - *p.lambda_star));
            else
                row.emplace_back("");
            worst_res = std::max(worst_res, p.residual);
        } else {
            for (int k = 0; k < 5; ++k) row.emplace_back("");
        }
        row.emplace_back(p.at_resonance_boundary ? "boundary"
                                                 : (p.lambda_star ? "discrete" : "none"));
        t.rows.push_back(std::move(row));
    }
    emit(cfg, "dispersion", t);
    std::printf("%zu frequencies, worst root residual %.3e\n", xis.size(), worst_res);
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    const Grid g(cfg.grid_l, cfg.grid_n);
    std::vector<double> xis = cfg.xi_list.empty()
                                  ? std::vector<double>{0.25, 0.8, 1.5}
                                  : cfg.xi_list;
    std::vector<double> times = cfg.times.empty() ? int_range(0, 10, 0.5) : cfg.times;
    std::sort(xis.begin(), xis.end());
    std::sort(times.begin(), times.end());
    bool any_resonant = false;
    for (double xi : xis)
        if (in_resonance_zone(xi)) {
            if (!cfg.experimental_resonance)
                throw resonance_error(
                    "evolve: xi within 1e-6 of sqrt(pi); pass --experimental-resonance "
                    "to force the attempt");
            any_resonant = true;
        }

    Rng rng(cfg.seed);
    std::vector<GridFunction> f0s;
    f0s.reserve(xis.size());
    for (std::size_t i = 0; i < xis.size(); ++i) f0s.push_back(rand_smooth(g, rng));

    Table snaps;
    snaps.comments = {
        "states evolved from a seeded smooth random profile per frequency",
        "grid_l=" + fmt_sci(cfg.grid_l) + " grid_n=" + std::to_string(cfg.grid_n) +
            " seed=" + std::to_string(cfg.seed) + " method=" +
            method_name(cfg.method) + " dt=" + fmt_sci(cfg.dt),
        "norm: weighted L2 norm of the state",
        "mass_re, mass_im: zeroth moment of the state",
        "cross_gap: weighted L2 distance between the two propagators (method=both)",
    };
    snaps.header = {"xi", "t", "norm", "mass_re", "mass_im", "cross_gap"};
    const GridFunction one = ones(g);
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const double xi = xis[i];
        GridFunction carried = f0s[i];
        double tprev = 0.0;
        for (double t : times) {
            GridFunction f(g);
            double gap = -1.0;
            if (cfg.method == Method::spectral) {
                f = propagate_spectral(xi, f0s[i], t, cfg.experimental_resonance);
            } else {
                carried = propagate_direct(xi, carried, t - tprev, cfg.dt).state;
                tprev = t;
                f = carried;
                if (cfg.method == Method::both) {
                    const GridFunction fs =
                        propagate_spectral(xi, f0s[i], t, cfg.experimental_resonance);
                    double d2 = 0.0;
                    for (int j = 0; j < g.point_count; ++j)
                        d2 += std::norm(fs.values[j] - f.values[j]) * g.w[j];
                    gap = std::sqrt(g.dx * d2);
                }
            }
            const cplx mass = inner_w(f, one);
            std::vector<Cell> row{xi, t, l2w(f), mass.real(), mass.imag()};
            if (gap >= 0.0)
                row.emplace_back(gap);
            else
                row.emplace_back("");
            snaps.rows.push_back(std::move(row));
        }
    }
    emit(cfg, "evolve_snapshots", snaps);

    try {
        if (any_resonant)
            throw resonance_error("evolve: no reference mode at the resonance");
        EvolutionConfig ec;
        ec.xi_list = xis;
        ec.times = times;
        ec.dt = cfg.dt;
        ec.method = cfg.method;
        ec.xi0 = 0.0;
        std::size_t next = 0;
        const DecayReport rep = decay_report(
            g, ec, [&](const Grid&, double) { return f0s.at(next++); });
        Table agg;
        agg.comments = {
            "difference from the macroscopic-mode reference, aggregated over xi",
            "fitted_rate=" + fmt_sci(rep.l2.rate) +
                " fit_residual=" + fmt_sci(rep.l2.fit_residual),
            "window=[" + fmt_sci(rep.window_start) + ", " + fmt_sci(rep.window_end) +
                "] monotone=" + (rep.monotone_on_window ? std::string("yes") : "no"),
            "reference_rate=" + fmt_sci(rep.reference_rate) +
                " tolerance=" + fmt_sci(rep.rate_tolerance),
        };
        agg.header = {"t", "l2", "h1", "hm1"};
        for (std::size_t it = 0; it < rep.times.size(); ++it)
            agg.rows.push_back({rep.times[it], rep.l2.value[it], rep.h1.value[it],
                                rep.hm1.value[it]});
        emit(cfg, "evolve_decay", agg);
    } catch (const config_error& e) {
        std::cout << "decay fit skipped: " << e.what() << "\n";
    } catch (const resonance_error& e) {
        std::cout << "decay fit skipped: " << e.what() << "\n";
    }
    return 0;
}

int cmd_parseval(const RunConfig& cfg) {
    const Grid g(cfg.grid_l, cfg.grid_n);
    const std::vector<double> xis =
        cfg.xi_list.empty()
            ? std::vector<double>{-2.5, -1.5, -0.8, -0.25, 0.0, 0.25, 0.8, 1.5, 2.5}
            : cfg.xi_list;
    for (double xi : xis)
        if (in_resonance_zone(xi) && !cfg.experimental_resonance)
            throw resonance_error("parseval: xi within 1e-6 of sqrt(pi)");
    const int pairs = 20;
    Rng rng(cfg.seed);
    Table t;
    t.comments = {
        "pairing identity and round-trip defects over seeded random smooth pairs",
        "grid_l=" + fmt_sci(cfg.grid_l) + " grid_n=" + std::to_string(cfg.grid_n) +
            " seed=" + std::to_string(cfg.seed),
        "parseval_rel: |spectral pairing - weighted inner product| / (|f| |g|)",
        "roundtrip_rel: |reconstruct(decompose(f)) - f| / |f|",
    };
    t.header = {"xi", "pair", "parseval_rel", "roundtrip_rel"};
    double worst_par = 0.0, worst_rec = 0.0;
    for (double xi : xis) {
        for (int k = 0; k < pairs; ++k) {
            const GridFunction f = rand_smooth(g, rng);
            const GridFunction h = rand_smooth(g, rng);
            const double par =
                std::abs(parseval_pairing(xi, f, h) - inner_w(f, h)) /
                (l2w(f) * l2w(h));
            const GridFunction back = reconstruct(xi, decompose(xi, f));
            double d2 = 0.0;
            for (int j = 0; j < g.point_count; ++j)
                d2 += std::norm(back.values[j] - f.values[j]) * g.w[j];
            const double rec = std::sqrt(g.dx * d2) / l2w(f);
            worst_par = std::max(worst_par, par);
            worst_rec = std::max(worst_rec, rec);
            t.rows.push_back({xi, k, par, rec});
        }
    }
    emit(cfg, "parseval", t);
    std::printf("worst pairing defect %.3e, worst round-trip defect %.3e\n", worst_par,
                worst_rec);
    if (worst_par >= 1e-6 || worst_rec >= 1e-6)
        throw tolerance_error("parseval: defects exceed 1e-6 at this resolution");
    return 0;
}

int cmd_decay(const RunConfig& cfg) {
    const Grid g(cfg.grid_l, cfg.grid_n);
    EvolutionConfig ec;
    ec.xi_list = cfg.xi_list.empty() ? int_range(-6, 6, 0.25) : cfg.xi_list;
    ec.times = cfg.times.empty() ? int_range(6, 12, 0.5) : cfg.times;
    std::sort(ec.xi_list.begin(), ec.xi_list.end());
    std::sort(ec.times.begin(), ec.times.end());
    ec.dt = cfg.dt;
    ec.method = cfg.method;
    ec.xi0 = cfg.xi0;
    Rng rng(cfg.seed);
    const DecayReport rep =
        decay_report(g, ec, [&](const Grid& gg, double) { return rand_smooth(gg, rng); });

    Table per;
    per.comments = {
        "weighted L2 distance from the reference, per frequency and time",
        "reference: discrete-mode flow" +
            std::string(ec.xi0 > 0.0 ? " truncated to |xi| <= " + fmt_sci(ec.xi0) : ""),
    };
    per.header = {"xi", "t", "norm"};
    for (std::size_t ix = 0; ix < rep.xi.size(); ++ix)
        for (std::size_t it = 0; it < rep.times.size(); ++it)
            per.rows.push_back({rep.xi[ix], rep.times[it], rep.per_xi[ix][it]});
    emit(cfg, "decay_per_xi", per);

    Table agg;
    agg.comments = {
        "xi-aggregated difference norms: plain, (1+xi^2)^{+1/2} and "
        "(1+xi^2)^{-1/2} weighted",
        "fitted rates: l2=" + fmt_sci(rep.l2.rate) + " h1=" + fmt_sci(rep.h1.rate) +
            " hm1=" + fmt_sci(rep.hm1.rate),
        "fit residuals: l2=" + fmt_sci(rep.l2.fit_residual) + " h1=" +
            fmt_sci(rep.h1.fit_residual) + " hm1=" + fmt_sci(rep.hm1.fit_residual),
        "window=[" + fmt_sci(rep.window_start) + ", " + fmt_sci(rep.window_end) +
            "] monotone=" + (rep.monotone_on_window ? std::string("yes") : "no"),
        "reference_rate=" + fmt_sci(rep.reference_rate) +
            " tolerance=" + fmt_sci(rep.rate_tolerance) +
            " richardson_max=" + fmt_sci(rep.richardson_max) +
            " propagator_gap=" + fmt_sci(rep.propagator_gap),
    };
    agg.header = {"t", "l2", "h1", "hm1"};
    for (std::size_t it = 0; it < rep.times.size(); ++it)
        agg.rows.push_back(
            {rep.times[it], rep.l2.value[it], rep.h1.value[it], rep.hm1.value[it]});
    emit(cfg, "decay_aggregate", agg);

    std::printf("fitted rate %.6f against reference %.6f + %.2f\n", rep.l2.rate,
                rep.reference_rate, rep.rate_tolerance);
    if (rep.l2.rate > rep.reference_rate + rep.rate_tolerance)
        throw tolerance_error("decay: fitted rate above the reference bound");
    return 0;
}

int cmd_chapman(const RunConfig& cfg) {
    const std::vector<double> times =
        cfg.times.empty() ? int_range(2, 20, 2.5) : cfg.times;
    const ChapmanReport rep = chapman_enskog_gap(times);
    Table t;
    t.comments = {
        "sup over the frequency band of |exp(lambda* t) - exp(-xi^2 t / 2)|",
        "slope=" + fmt_sci(rep.slope) +
            " (log-log fit over the listed times)",
        "t_gap_range_over_mean=" + fmt_sci(rep.tgap_range_over_mean),
    };
    t.header = {"t", "gap", "t_gap"};
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        t.rows.push_back({rep.t[i], rep.gap[i], rep.t_gap[i]});
    emit(cfg, "chapman_enskog", t);
    std::printf("log-log slope %.6f, t*gap spread/mean %.4f over t in [%g, %g]\n",
                rep.slope, rep.tgap_range_over_mean, times.front(), times.back());
    return 0;
}

int cmd_selftest(const RunConfig& cfg, bool tamper) {
    SelftestOptions opt;
    opt.grid_l = cfg.grid_l;
    opt.grid_n = cfg.grid_n;
    opt.seed = cfg.seed;
    opt.tamper_dawson = tamper;
    const auto results = run_selftest(opt);
    Table t;
    t.comments = {"full verification sweep at grid_n=" + std::to_string(opt.grid_n) +
                  " grid_l=" + fmt_sci(opt.grid_l) +
                  " seed=" + std::to_string(opt.seed)};
    t.header = {"criterion", "name", "check", "measured", "bound", "sense", "verdict"};
    int failed = 0;
    for (const auto& r : results) {
        std::printf("criterion %2d  %-52s  measured %.6e  %s %.6e  %s\n", r.id,
                    r.name.c_str(), r.measured,
                    r.sense == Sense::above ? "must exceed" : "tolerance", r.tolerance,
                    r.pass ? "PASS" : "FAIL");
        for (const auto& c : r.checks) {
            if (r.checks.size() > 1 || !r.pass)
                std::printf("    - %-58s %.6e %s %.6e  %s\n", c.name.c_str(), c.measured,
                            c.sense == Sense::below ? "<" : ">", c.bound,
                            c.pass ? "ok" : "FAIL");
            t.rows.push_back({r.id, r.name, c.name, c.measured, c.bound,
                              c.sense == Sense::below ? "below" : "above",
                              c.pass ? "pass" : "fail"});
        }
        if (!r.pass) ++failed;
    }
    emit(cfg, "selftest", t);
    std::printf("%d of 13 criteria passed\n", 13 - failed);
    return failed == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for the linear kinetic relaxation model"};
    app.require_subcommand(1);

    std::string config_path, xi_spec, times_spec, method_str, format_str, out_dir;
    std::string grid_n_str, grid_l_str, dt_str, xi0_str, seed_str;
    bool experimental = false, tamper = false;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--xi", xi_spec, "frequencies: a,b,c and a:b:step accepted");
    app.add_option("--times", times_spec, "times: a,b,c and a:b:step accepted");
    app.add_option("--grid-n", grid_n_str, "velocity grid points (even)");
    app.add_option("--grid-l", grid_l_str, "velocity grid half width");
    app.add_option("--dt", dt_str, "time step of the direct integrator");
    app.add_option("--method", method_str, "spectral | direct | both");
    app.add_option("--xi0", xi0_str, "truncation cutoff for the decay reference");
    app.add_option("--seed", seed_str, "random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format_str, "csv | json");
    app.add_flag("--experimental-resonance", experimental,
                 "attempt evaluation inside the resonance exclusion zone");

    auto* sub_dispersion =
        app.add_subcommand("dispersion", "eigenvalue curve sweep with diagnostics");
    auto* sub_evolve = app.add_subcommand("evolve", "propagate states and report decay");
    auto* sub_parseval =
        app.add_subcommand("parseval", "pairing identity and round-trip defects");
    auto* sub_decay = app.add_subcommand("decay", "difference-from-reference decay fit");
    auto* sub_chapman =
        app.add_subcommand("chapman-enskog", "diffusion approximation gap vs time");
    auto* sub_selftest =
        app.add_subcommand("selftest", "run every acceptance check and report verdicts");
    sub_selftest->add_flag("--tamper-dawson", tamper, "negative control")->group("");
    for (auto* s : {sub_dispersion, sub_evolve, sub_parseval, sub_decay, sub_chapman,
                    sub_selftest})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (!grid_n_str.empty()) bgk::apply_key(cfg, "grid_n", grid_n_str);
        if (!grid_l_str.empty()) bgk::apply_key(cfg, "grid_l", grid_l_str);
        if (!xi_spec.empty()) bgk::apply_key(cfg, "xi", xi_spec);
        if (!times_spec.empty()) bgk::apply_key(cfg, "times", times_spec);
        if (!dt_str.empty()) bgk::apply_key(cfg, "dt", dt_str);
        if (!method_str.empty()) bgk::apply_key(cfg, "method", method_str);
        if (!xi0_str.empty()) bgk::apply_key(cfg, "xi0", xi0_str);
        if (!seed_str.empty()) bgk::apply_key(cfg, "seed", seed_str);
        if (!out_dir.empty()) bgk::apply_key(cfg, "out", out_dir);
        if (!format_str.empty()) bgk::apply_key(cfg, "format", format_str);
        if (experimental) cfg.experimental_resonance = true;

        if (*sub_dispersion) return cmd_dispersion(cfg);
        if (*sub_evolve) return cmd_evolve(cfg);
        if (*sub_parseval) return cmd_parseval(cfg);
        if (*sub_decay) return cmd_decay(cfg);
        if (*sub_chapman) return cmd_chapman(cfg);
        if (*sub_selftest) return cmd_selftest(cfg, tamper);
        return 2;
    } catch (const bgk::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bgk::resonance_error& e) {
        std::cerr << "resonance: " << e.what() << "\n";
        return 3;
    } catch (const bgk::tolerance_error& e) {
        std::cerr << "tolerance: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}
