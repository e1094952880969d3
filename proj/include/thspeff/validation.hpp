// SPDX-License-Identifier: Apache-2.0
//
// Invariant suites behind `thspeff validate`. Each check reports observed,
// expected, tolerance and a verdict; the CLI prints them as JSON lines.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "ensembles.hpp"
#include "laws.hpp"
#include "mixture.hpp"
#include "montecarlo.hpp"
#include "receivers.hpp"
#include "rng.hpp"

namespace thspeff {

struct Check {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"moments", "rank", "receivers", "entropy", "slopes"};
    return names;
}

namespace detail {

inline Check near(std::string name, double observed, double expected, double tol)
{
    return {std::move(name), observed, expected, tol, std::abs(observed - expected) <= tol};
}

inline Check relative(std::string name, double observed, double expected, double rel)
{
    const double tol = rel * std::abs(expected);
    return {std::move(name), observed, expected, tol, std::abs(observed - expected) <= tol};
}

/// observed <= bound + slack.
inline Check at_most(std::string name, double observed, double bound, double slack)
{
    return {std::move(name), observed, bound, slack, observed <= bound + slack};
}

inline std::string fmt(double x)
{
    std::string s = std::to_string(x);
    while (s.size() > 1 && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

inline void suite_moments(std::vector<Check>& out, std::uint64_t seed)
{
    const auto& t = MomentTable::instance();
    bool recurrence = true;
    for (unsigned n = 1; n <= MomentTable::max_order; ++n)
        for (unsigned l = 1; l <= n; ++l)
            recurrence = recurrence && t.stirling2(n, l) == l * t.stirling2(n - 1, l) + t.stirling2(n - 1, l - 1);
    out.push_back({"moments/stirling_recurrence", recurrence ? 1.0 : 0.0, 1.0, 0.0, recurrence});
    bool catalan = true;
    for (unsigned n = 1; n <= MomentTable::max_order; ++n)
        catalan = catalan && t.catalan(n) == t.catalan(n - 1) * 2 * (2 * n - 1) / (n + 1);
    out.push_back({"moments/narayana_rows_are_catalan", catalan ? 1.0 : 0.0, 1.0, 0.0, catalan});

    // E[m2] over the 16 equiprobable TH(Ns=1) matrices with N = K = 2.
    long double avg = 0;
    for (unsigned code = 0; code < 16; ++code) {
        std::vector<Pulse> p{{code & 1u, (code & 2u) ? std::int8_t{-1} : std::int8_t{1}},
                             {(code >> 2) & 1u, (code & 8u) ? std::int8_t{-1} : std::int8_t{1}}};
        avg += summarize(SpreadingMatrix(EnsembleSpec::th(2, 2, 1), p), 2).moments[1] / 16.0L;
    }
    out.push_back(near("moments/finite_n_brute_force_N2_K2_L2", expected_moment_finite(2, 2, 2),
                       static_cast<double>(avg), 0.0));
    out.push_back(at_most("moments/poisson_exceeds_mp_L4_beta1", -(PoissonLaw(1.0).moment(4) - MarchenkoPasturLaw(1.0).moment(4)),
                          0.0, -1.0));

    Experiment e;
    e.ensemble = EnsembleSpec::th(200, 1, 1);
    e.grid = {0.5};
    e.trials = 1000;
    e.statistics = {Statistic::esd_moments};
    e.max_moment = 4;
    e.seed = seed;
    const auto r = run(e);
    const PoissonLaw law(0.5);
    out.push_back(near("moments/m1_constant_std", r.at("m1").std[0], 0.0, 0.0));
    for (unsigned l = 2; l <= 4; ++l) {
        const auto& c = r.at("m" + std::to_string(l));
        out.push_back(near("moments/m" + std::to_string(l) + "_N200_beta0.5_vs_bell", c.mean[0], law.moment(l),
                           3.0 * c.std_error[0]));
    }
}

inline void suite_rank(std::vector<Check>& out, std::uint64_t seed)
{
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i)
        grid.push_back(0.2 * i);
    for (std::size_t ns : {1u, 2u}) {
        Experiment e;
        e.ensemble = EnsembleSpec::th(50, 1, ns);
        e.grid = grid;
        e.trials = 500;
        e.statistics = {Statistic::rank};
        e.seed = seed;
        const auto r = run(e).at("rank");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::string tag = "beta=" + fmt(r.x[i]);
            if (ns == 1)
                out.push_back(near("rank/ns1_N50_" + tag, r.mean[i], rank_limit(r.x[i]), 0.02));
            else
                out.push_back(at_most("rank/ns2_bound_N50_" + tag, r.mean[i], rank_upper_bound(r.x[i], 2), 2.0 * r.std[i]));
        }
    }
}

inline void suite_receivers(std::vector<Check>& out, std::uint64_t seed)
{
    double gain = 0.0, noise = 0.0;
    for (unsigned inst = 0; inst < 100; ++inst) {
        Engine eng = make_engine(derive_seed(seed, 0x5ec, inst));
        const std::size_t n = 2 + uniform_below(eng, 15);
        const std::size_t k = 1 + uniform_below(eng, 2 * n);
        const SpreadingMatrix m = sample(EnsembleSpec::th(n, k, 1, eng()));
        for (double alpha : {1e-6, 0.1, 1.0})
            for (double eta : {0.0, 1.0}) {
                const LinearFrontEnd fe{alpha, eta};
                gain = std::max(gain, max_abs_difference(gain_closed_form(m, fe).gains, gain_direct(m, fe).gains));
                noise = std::max(noise, max_abs_difference(noise_covariance_closed_form(m, fe),
                                                           noise_covariance_direct(m, fe)));
            }
    }
    out.push_back(near("receivers/gain_closed_vs_direct", gain, 0.0, 1e-10));
    out.push_back(near("receivers/noise_covariance_closed_vs_direct", noise, 0.0, 1e-10));
    double eq = 0.0;
    for (double b = 0.1; b <= 2.0 + 1e-12; b += 0.1)
        for (double g : {0.1, 1.0, 10.0, 100.0, 1e4})
            eq = std::max(eq, std::abs(linear_th_ns1(b, g) - sumf_th_knownS(b, g, 1)));
    out.push_back(near("receivers/linear_th_ns1_equals_knownS_ns1", eq, 0.0, 1e-12));
}

inline void suite_entropy(std::vector<Check>& out, std::uint64_t seed)
{
    for (double v : {1.0, 0.01, 100.0})
        out.push_back(near("entropy/single_gaussian_var=" + fmt(v), mixture_entropy({{1.0}, {v}}),
                           std::log2(std::numbers::pi * std::numbers::e * v), 1e-8));
    Engine eng = make_engine(derive_seed(seed, 0xe17));
    unsigned ok = 0;
    for (unsigned i = 0; i < 50; ++i) {
        const std::size_t k = 1 + uniform_below(eng, 6);
        GaussianMixture m;
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double u = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
            m.weights.push_back(-std::log(u));
            s += m.weights.back();
            const double w = static_cast<double>(eng() >> 11) * 0x1.0p-53;
            m.variances.push_back(std::pow(10.0, -2.0 + 5.0 * w));
        }
        for (double& w : m.weights)
            w /= s;
        const double h = mixture_entropy(m);
        const EntropyBounds b = entropy_bounds(m);
        ok += (h >= b.lower() - 1e-8 && h <= b.upper() + 1e-8);
    }
    out.push_back(near("entropy/sandwich_bounds_random_mixtures", ok, 50.0, 0.0));
    for (double beta : {0.5, 1.0, 2.0})
        for (double gamma : {1.0, 10.0, 100.0})
            for (std::size_t ns : {1u, 2u}) {
                const GaussianMixture pz = mixture_pz(beta, gamma, ns);
                const double m2 = mixture_moment_quadrature(pz, 1), m4 = mixture_moment_quadrature(pz, 2);
                out.push_back(near("entropy/kurtosis_quadrature_beta=" + fmt(beta) + "_gamma=" + fmt(gamma)
                                       + "_ns=" + std::to_string(ns),
                                   m4 / (m2 * m2), kurtosis_pz(beta, gamma, ns), 1e-6));
            }
}

inline void suite_slopes(std::vector<Check>& out)
{
    for (double beta : {0.5, 1.0, 2.0}) {
        const std::string b = "beta=" + fmt(beta);
        const auto th = asymptotics(bind(Formula::c_opt_th_ns1, beta), beta);
        out.push_back(relative("slopes/c_opt_th_ns1_S_inf_" + b, th.s_inf, -std::expm1(-beta), 0.01));
        out.push_back(near("slopes/c_opt_th_ns1_eta_min_" + b, th.eta_min, std::numbers::ln2, 1e-3));
        out.push_back(relative("slopes/c_opt_th_ns1_S0_" + b, th.s0, 2.0 * beta / (1.0 + beta), 0.01));
        for (std::size_t ns : {1u, 2u}) {
            const auto k = asymptotics(bind(Formula::sumf_th_knownS, beta, ns), beta);
            const std::string tag = "_ns=" + std::to_string(ns) + "_" + b;
            out.push_back(near("slopes/knownS_eta_min" + tag, k.eta_min, std::numbers::ln2, 1e-3));
            out.push_back(relative("slopes/knownS_S0" + tag, k.s0, sumf_wideband_slope(beta), 0.01));
            out.push_back(relative("slopes/knownS_S_inf" + tag, k.s_inf, sumf_th_knownS_slope(beta, ns), 0.02));
        }
        const auto lin = asymptotics(bind(Formula::linear_th_ns1, beta), beta);
        out.push_back(near("slopes/linear_th_ns1_eta_min_" + b, lin.eta_min, std::numbers::ln2, 1e-3));
        const auto ds = asymptotics(bind(Formula::sumf_ds, beta), beta);
        out.push_back(relative("slopes/sumf_ds_S0_" + b, ds.s0, sumf_wideband_slope(beta), 0.01));
    }
    const auto star = asymptotics(bind(Formula::sumf_th_star, 1.0, 1), 1.0);
    out.push_back(relative("slopes/star_ns1_S_inf_beta=1", star.s_inf, std::exp(-1.0), 0.02));
    out.push_back(near("slopes/mmse_ds_beta=2_gamma=1e6", mmse_ds(2.0, 1e6), 2.0, 1e-3));
}

} // namespace detail

/// Runs one suite by name, or all of them for "all".
inline std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed = 1)
{
    std::vector<Check> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "moments")
        known = true, detail::suite_moments(out, seed);
    if (all || suite == "rank")
        known = true, detail::suite_rank(out, seed);
    if (all || suite == "receivers")
        known = true, detail::suite_receivers(out, seed);
    if (all || suite == "entropy")
        known = true, detail::suite_entropy(out, seed);
    if (all || suite == "slopes")
        known = true, detail::suite_slopes(out);
    require(known, "unknown validation suite '" + suite + "' (moments, rank, receivers, entropy, slopes, all)");
    return out;
}

} // namespace thspeff
