// SPDX-License-Identifier: Apache-2.0
//
// Figure recipes: each id expands into a list of curves (analytic closed forms
// and Monte Carlo mark sets) ready for CSV output.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "csv.hpp"
#include "laws.hpp"
#include "mixture.hpp"
#include "montecarlo.hpp"
#include "sweep.hpp"

namespace thspeff {

struct Grid {
    double lo = 0.0, hi = 0.0, step = 1.0;
};

/// lo, lo+step, ... up to hi (inclusive within a small tolerance).
inline std::vector<double> linear_grid(const Grid& g)
{
    require(g.step > 0.0 && g.hi >= g.lo, "grid: need lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((g.hi - g.lo) / g.step + 1e-9));
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        v[i] = g.lo + static_cast<double>(i) * g.step;
    return v;
}

inline constexpr Grid default_ebn0_grid{-2.0, 50.0, 0.5};
inline constexpr Grid default_beta_grid{0.05, 3.0, 0.05};

struct FigureOptions {
    std::optional<double> beta;
    std::optional<Grid> grid;        // overrides the figure's main abscissa grid
    std::optional<std::size_t> n;    // chips for Monte Carlo mark sets
    std::optional<std::size_t> trials;
    std::optional<double> ebn0_db;   // vs-β figures at one E_b/N0
    std::optional<double> gamma;     // figure 4
    std::uint64_t seed = 1;
};

struct FigureCurve {
    std::string stem; // file name without extension
    SweepResult curve;
    HeaderLines header;
};

inline const std::vector<int>& figure_ids()
{
    static const std::vector<int> ids{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    return ids;
}

namespace detail {

struct FigureBuilder {
    int id;
    std::string title;
    const FigureOptions& opt;
    HeaderLines common;
    std::vector<FigureCurve> curves;

    FigureBuilder(int id_, std::string title_, const FigureOptions& o, HeaderLines params)
        : id(id_), title(std::move(title_)), opt(o)
    {
        common.push_back({"figure", std::to_string(id) + " (" + title + ")"});
        for (auto& p : params)
            common.push_back(std::move(p));
        common.push_back({"seed", std::to_string(opt.seed)});
    }

    void add(std::string stem, SweepResult r, HeaderLines extra = {})
    {
        HeaderLines h = common;
        for (auto& e : extra)
            h.push_back(std::move(e));
        curves.push_back({"fig" + std::to_string(id) + "_" + stem, std::move(r), std::move(h)});
    }
};

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline HeaderLines asymptotic_header(const Curve& c, double beta)
{
    const AsymptoticParams p = asymptotics(c, beta);
    HeaderLines h;
    h.push_back({"eta_min_db", format_number(to_db(p.eta_min))});
    h.push_back({"S0", format_number(p.s0)});
    h.push_back({"S_inf", format_number(p.s_inf)});
    h.push_back({"L_inf", p.l_inf ? format_number(*p.l_inf) : std::string("undefined")});
    h.push_back({"S_inf_converged", yes_no(p.converged)});
    return h;
}

/// Analytic C on a regular E_b/N0 grid; 0 below η_min.
inline SweepResult analytic_vs_ebn0(const std::string& name, const Curve& c, double beta, const std::vector<double>& grid)
{
    SweepResult r;
    r.name = name;
    r.x_label = "ebn0_db";
    r.y_label = "C_bps_per_hz";
    const auto pts = ebn0_on_grid(c, beta, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.x.push_back(grid[i]);
        r.mean.push_back(pts[i].capacity);
    }
    r.metadata["beta"] = format_number(beta);
    return r;
}

/// Analytic C vs β at one E_b/N0. β values where the target lies below η_min give 0.
inline SweepResult analytic_vs_beta(const std::string& name, const std::function<Curve(double)>& family,
                                    const std::vector<double>& betas, double db)
{
    SweepResult r;
    r.name = name;
    r.x_label = "beta";
    r.y_label = "C_bps_per_hz";
    for (double b : betas) {
        r.x.push_back(b);
        r.mean.push_back(ebn0_on_grid(family(b), b, {db}).front().capacity);
    }
    r.metadata["ebn0_db"] = format_number(db);
    return r;
}

inline SweepResult analytic_fn(const std::string& name, const std::string& xl, const std::string& yl,
                               const std::vector<double>& xs, const std::function<double(double)>& f)
{
    SweepResult r;
    r.name = name;
    r.x_label = xl;
    r.y_label = yl;
    for (double x : xs) {
        r.x.push_back(x);
        r.mean.push_back(f(x));
    }
    return r;
}

inline Experiment ebn0_experiment(std::size_t n, std::size_t ns, double beta, std::vector<double> grid,
                                  std::size_t trials, std::uint64_t seed, Statistic stat, Formula reference)
{
    Experiment e;
    e.ensemble = EnsembleSpec::th(n, 1, ns);
    e.axis = Axis::ebn0_db;
    e.grid = std::move(grid);
    e.trials = trials;
    e.statistics = {stat};
    e.beta = beta;
    e.seed = seed;
    e.reference = reference;
    return e;
}

inline SweepResult relabel(SweepResult r, std::string name, std::string y_label)
{
    r.name = std::move(name);
    r.y_label = std::move(y_label);
    return r;
}

inline HeaderLines mc_header(const Experiment& e)
{
    return {{"monte_carlo", "N=" + std::to_string(e.ensemble.chips) + ", Ns=" + std::to_string(e.ensemble.pulses)
                                + ", trials=" + std::to_string(e.trials)},
            {"gamma_map", std::string(info(e.reference).name)}};
}

} // namespace detail

inline std::vector<FigureCurve> make_figure(int id, const FigureOptions& opt)
{
    using namespace detail;
    const auto ebn0_grid = linear_grid(opt.grid.value_or(default_ebn0_grid));
    const auto beta_grid = linear_grid(opt.grid.value_or(default_beta_grid));
    const double fixed_db = opt.ebn0_db.value_or(10.0);

    switch (id) {
    case 2: {
        const double beta = opt.beta.value_or(0.5);
        const std::size_t n = opt.n.value_or(50);
        const std::size_t trials = opt.trials.value_or(100);
        FigureBuilder fb(2, "optimum decoding vs E_b/N0",
                         opt, {{"beta", format_number(beta)}, {"ebn0_grid_db", "see x column"}});
        const Curve th = bind(Formula::c_opt_th_ns1, beta), ds = bind(Formula::c_opt_ds, beta),
                    orth = bind(Formula::orthogonal, beta);
        fb.add("th_ns1", analytic_vs_ebn0("c_opt_th_ns1", th, beta, ebn0_grid), asymptotic_header(th, beta));
        fb.add("ds", analytic_vs_ebn0("c_opt_ds", ds, beta, ebn0_grid), asymptotic_header(ds, beta));
        fb.add("orthogonal", analytic_vs_ebn0("orthogonal", orth, beta, ebn0_grid));
        std::vector<double> mc_grid;
        for (double x : linear_grid({-1.5, 19.5, 1.5}))
            mc_grid.push_back(x);
        for (std::size_t ns : {1u, 2u}) {
            const auto e = ebn0_experiment(n, ns, beta, mc_grid, trials, opt.seed, Statistic::logdet,
                                           Formula::c_opt_th_ns1);
            fb.add("th_ns" + std::to_string(ns) + "_empirical",
                   relabel(run(e).at("logdet"), "logdet_th_ns" + std::to_string(ns), "C_bps_per_hz"), mc_header(e));
        }
        return fb.curves;
    }
    case 3: {
        const std::size_t n = opt.n.value_or(50);
        const std::size_t trials = opt.trials.value_or(500);
        FigureBuilder fb(3, "normalized rank vs load", opt, {{"N", std::to_string(n)}});
        fb.add("th_ns1", analytic_fn("rank_th_ns1", "beta", "normalized_rank", beta_grid, rank_limit));
        fb.add("th_ns2_bound", analytic_fn("rank_bound_ns2", "beta", "normalized_rank", beta_grid,
                                           [](double b) { return rank_upper_bound(b, 2); }));
        fb.add("ds", analytic_fn("rank_ds", "beta", "normalized_rank", beta_grid,
                                 [](double b) { return std::min(1.0, b); }));
        const auto mc_grid = linear_grid({0.1, beta_grid.back(), 0.1});
        struct Set {
            const char* stem;
            EnsembleSpec spec;
        };
        const Set sets[] = {{"th_ns1_empirical", EnsembleSpec::th(n, 1, 1)},
                            {"th_ns2_empirical", EnsembleSpec::th(n, 1, 2)},
                            {"ds_empirical", EnsembleSpec::ds(n, 1)}};
        for (const auto& s : sets) {
            Experiment e;
            e.ensemble = s.spec;
            e.axis = Axis::beta;
            e.grid = mc_grid;
            e.trials = trials;
            e.statistics = {Statistic::rank};
            e.seed = opt.seed;
            fb.add(s.stem, relabel(run(e).at("rank"), std::string("rank_") + s.stem, "normalized_rank"),
                   {{"monte_carlo", to_string(s.spec.kind) + ", N=" + std::to_string(n) + ", Ns="
                                        + std::to_string(s.spec.pulses_per_symbol())
                                        + ", trials=" + std::to_string(trials)}});
        }
        return fb.curves;
    }
    case 4: {
        const double beta = opt.beta.value_or(1.0);
        const double gamma = opt.gamma.value_or(from_db(13.0));
        const std::size_t n = opt.n.value_or(200);
        const std::size_t samples = opt.trials.value_or(1000000);
        FigureBuilder fb(4, "SUMF interference-plus-noise density, real part", opt,
                         {{"beta", format_number(beta)}, {"gamma", format_number(gamma)}, {"Ns", "1"}});
        Experiment e;
        e.ensemble = EnsembleSpec::th(n, 1, 1);
        e.grid = {beta};
        e.beta = beta;
        e.trials = 1;
        e.statistics = {Statistic::sumf_mi};
        e.seed = opt.seed;
        const auto h = interference_histogram(e, gamma, 200, samples);
        SweepResult hist;
        hist.name = "histogram";
        hist.tag = CurveTag::empirical;
        hist.x_label = "re_z";
        hist.y_label = "density";
        for (std::size_t b = 0; b < h.centers.size(); ++b) {
            const double count = h.density[b] * static_cast<double>(h.samples) * h.bin_width;
            const double sd = std::sqrt(count) / (static_cast<double>(h.samples) * h.bin_width);
            hist.x.push_back(h.centers[b]);
            hist.mean.push_back(h.density[b]);
            hist.std.push_back(sd);
            hist.std_error.push_back(sd);
            hist.trials.push_back(h.samples);
        }
        const GaussianMixture pz = mixture_pz(beta, gamma, 1);
        fb.add("histogram", hist,
               {{"samples", std::to_string(samples)},
                {"N", std::to_string(n)},
                {"kurtosis_empirical", format_number(h.kurtosis())},
                {"kurtosis_mixture", format_number(kurtosis_pz(beta, gamma, 1))},
                {"outside_range", std::to_string(h.outside)}});
        fb.add("mixture", analytic_fn("mixture_real_marginal", "re_z", "density", h.centers,
                                      [&](double x) { return pz.real_marginal_density(x); }));
        const double var = 0.5 * (1.0 + beta * gamma);
        fb.add("gaussian", analytic_fn("moment_matched_gaussian", "re_z", "density", h.centers, [&](double x) {
                   return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
               }));
        return fb.curves;
    }
    case 5: {
        const double beta = opt.beta.value_or(1.0);
        const std::size_t n = opt.n.value_or(100);
        const std::size_t trials = opt.trials.value_or(1000);
        FigureBuilder fb(5, "SUMF spectral efficiency and mutual information vs E_b/N0", opt,
                         {{"beta", format_number(beta)}});
        const Curve ds = bind(Formula::sumf_ds, beta);
        fb.add("sumf_ds", analytic_vs_ebn0("sumf_ds", ds, beta, ebn0_grid), asymptotic_header(ds, beta));
        for (std::size_t ns : {1u, 2u, 5u}) {
            const Curve k = bind(Formula::sumf_th_knownS, beta, ns);
            fb.add("knownS_ns" + std::to_string(ns),
                   analytic_vs_ebn0("sumf_th_knownS_ns" + std::to_string(ns), k, beta, ebn0_grid),
                   asymptotic_header(k, beta));
            const Curve s = bind(Formula::sumf_th_star, beta, ns);
            fb.add("star_ns" + std::to_string(ns),
                   analytic_vs_ebn0("sumf_th_star_ns" + std::to_string(ns), s, beta, ebn0_grid));
        }
        fb.add("orthogonal", analytic_vs_ebn0("orthogonal", bind(Formula::orthogonal, beta), beta, ebn0_grid));
        const auto e = ebn0_experiment(n, 2, beta, linear_grid({0.0, 20.0, 2.0}), trials, opt.seed,
                                       Statistic::sumf_mi, Formula::sumf_th_knownS);
        fb.add("knownS_ns2_empirical", relabel(run(e).at("sumf_mi"), "sumf_mi_th_ns2", "I_bps_per_hz"), mc_header(e));
        return fb.curves;
    }
    case 6: {
        FigureBuilder fb(6, "SUMF vs load at fixed E_b/N0", opt, {{"ebn0_db", format_number(fixed_db)}});
        fb.add("sumf_ds", analytic_vs_beta("sumf_ds", [](double b) { return bind(Formula::sumf_ds, b); }, beta_grid,
                                           fixed_db));
        for (std::size_t ns : {1u, 2u, 5u}) {
            fb.add("knownS_ns" + std::to_string(ns),
                   analytic_vs_beta("sumf_th_knownS_ns" + std::to_string(ns),
                                    [ns](double b) { return bind(Formula::sumf_th_knownS, b, ns); }, beta_grid,
                                    fixed_db));
            fb.add("star_ns" + std::to_string(ns),
                   analytic_vs_beta("sumf_th_star_ns" + std::to_string(ns),
                                    [ns](double b) { return bind(Formula::sumf_th_star, b, ns); }, beta_grid,
                                    fixed_db));
        }
        fb.add("orthogonal", analytic_vs_beta("orthogonal", [](double b) { return bind(Formula::orthogonal, b); },
                                              beta_grid, fixed_db));
        return fb.curves;
    }
    case 7: {
        const double beta = opt.beta.value_or(0.9);
        FigureBuilder fb(7, "MMSE and decorrelator vs E_b/N0", opt, {{"beta", format_number(beta)}});
        const Curve mm = bind(Formula::mmse_ds, beta), lin = bind(Formula::linear_th_ns1, beta);
        fb.add("mmse_ds", analytic_vs_ebn0("mmse_ds", mm, beta, ebn0_grid), asymptotic_header(mm, beta));
        if (beta < 1.0) {
            const Curve de = bind(Formula::deco_ds, beta);
            fb.add("deco_ds", analytic_vs_ebn0("deco_ds", de, beta, ebn0_grid), asymptotic_header(de, beta));
        }
        fb.add("linear_th_ns1", analytic_vs_ebn0("linear_th_ns1", lin, beta, ebn0_grid), asymptotic_header(lin, beta));
        fb.add("orthogonal", analytic_vs_ebn0("orthogonal", bind(Formula::orthogonal, beta), beta, ebn0_grid));
        return fb.curves;
    }
    case 8: {
        FigureBuilder fb(8, "linear receivers vs load at fixed E_b/N0", opt, {{"ebn0_db", format_number(fixed_db)}});
        fb.add("mmse_ds", analytic_vs_beta("mmse_ds", [](double b) { return bind(Formula::mmse_ds, b); }, beta_grid,
                                           fixed_db));
        std::vector<double> below_one;
        for (double b : beta_grid)
            if (b < 1.0)
                below_one.push_back(b);
        if (!below_one.empty())
            fb.add("deco_ds", analytic_vs_beta("deco_ds", [](double b) { return bind(Formula::deco_ds, b); },
                                               below_one, fixed_db));
        fb.add("linear_th_ns1", analytic_vs_beta("linear_th_ns1",
                                                 [](double b) { return bind(Formula::linear_th_ns1, b); }, beta_grid,
                                                 fixed_db));
        fb.add("orthogonal", analytic_vs_beta("orthogonal", [](double b) { return bind(Formula::orthogonal, b); },
                                              beta_grid, fixed_db));
        return fb.curves;
    }
    case 9: {
        FigureBuilder fb(9, "MMSE vs load at several E_b/N0", opt, {{"ebn0_db", "10, 30, 50"}});
        for (double db : {10.0, 30.0, 50.0}) {
            const std::string tag = std::to_string(static_cast<int>(db)) + "db";
            fb.add("mmse_ds_" + tag, analytic_vs_beta("mmse_ds_" + tag,
                                                      [](double b) { return bind(Formula::mmse_ds, b); }, beta_grid,
                                                      db));
            fb.add("linear_th_ns1_" + tag,
                   analytic_vs_beta("linear_th_ns1_" + tag, [](double b) { return bind(Formula::linear_th_ns1, b); },
                                    beta_grid, db));
        }
        std::vector<double> above_one;
        for (double b : beta_grid)
            if (b > 1.0)
                above_one.push_back(b);
        if (!above_one.empty())
            fb.add("mmse_ds_limit", analytic_fn("mmse_ds_high_snr_limit", "beta", "C_bps_per_hz", above_one,
                                                [](double b) { return b * std::log2(b / (b - 1.0)); }));
        return fb.curves;
    }
    case 10: {
        const double beta = opt.beta.value_or(1.0);
        const std::size_t n = opt.n.value_or(50);
        const std::size_t trials = opt.trials.value_or(100);
        FigureBuilder fb(10, "optimum vs linear receivers vs E_b/N0", opt, {{"beta", format_number(beta)}});
        const Curve ds = bind(Formula::c_opt_ds, beta), th = bind(Formula::c_opt_th_ns1, beta),
                    sd = bind(Formula::sumf_ds, beta), lin = bind(Formula::linear_th_ns1, beta);
        fb.add("c_opt_ds", analytic_vs_ebn0("c_opt_ds", ds, beta, ebn0_grid), asymptotic_header(ds, beta));
        fb.add("c_opt_th_ns1", analytic_vs_ebn0("c_opt_th_ns1", th, beta, ebn0_grid), asymptotic_header(th, beta));
        fb.add("sumf_ds", analytic_vs_ebn0("sumf_ds", sd, beta, ebn0_grid), asymptotic_header(sd, beta));
        fb.add("linear_th_ns1", analytic_vs_ebn0("linear_th_ns1", lin, beta, ebn0_grid), asymptotic_header(lin, beta));
        for (std::size_t ns : {1u, 2u})
            fb.add("star_ns" + std::to_string(ns),
                   analytic_vs_ebn0("sumf_th_star_ns" + std::to_string(ns), bind(Formula::sumf_th_star, beta, ns),
                                    beta, ebn0_grid));
        const auto e = ebn0_experiment(n, 2, beta, linear_grid({0.0, 30.0, 2.0}), trials, opt.seed,
                                       Statistic::logdet, Formula::c_opt_th_ns1);
        fb.add("th_ns2_empirical", relabel(run(e).at("logdet"), "logdet_th_ns2", "C_bps_per_hz"), mc_header(e));
        return fb.curves;
    }
    case 11: {
        FigureBuilder fb(11, "optimum and SUMF vs load at fixed E_b/N0", opt, {{"ebn0_db", format_number(fixed_db)}});
        const std::pair<const char*, Formula> list[] = {
            {"c_opt_ds", Formula::c_opt_ds},   {"c_opt_th_ns1", Formula::c_opt_th_ns1},
            {"sumf_ds", Formula::sumf_ds},     {"sumf_th_knownS_ns1", Formula::sumf_th_knownS},
            {"sumf_th_star_ns1", Formula::sumf_th_star}, {"mmse_ds", Formula::mmse_ds},
            {"orthogonal", Formula::orthogonal}};
        for (const auto& [name, f] : list)
            fb.add(name, analytic_vs_beta(name, [f = f](double b) { return bind(f, b, 1); }, beta_grid, fixed_db));
        return fb.curves;
    }
    default: break;
    }
    std::string known;
    for (int i : figure_ids())
        known += (known.empty() ? "" : ", ") + std::to_string(i);
    throw DomainError("unknown figure id " + std::to_string(id) + " (known: " + known + ")");
}

} // namespace thspeff
