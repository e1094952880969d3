// SPDX-License-Identifier: Apache-2.0
//
// Large-system spectral efficiencies (b/s/Hz) as functions of the load β and
// the per-user SNR γ, the E_b/N0 map η = βγ/C(γ), and the four wideband /
// high-SNR parameters of a C(η) curve.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "error.hpp"
#include "laws.hpp"
#include "mixture.hpp"
#include "sweep.hpp"

namespace thspeff {

namespace detail {

inline void check_beta_gamma(double beta, double gamma)
{
    require(beta > 0.0 && std::isfinite(beta), "beta must be positive and finite");
    require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be >= 0 and finite");
}

/// Σ_k Pois(mean)(k) fn(k), continued past k_max while terms exceed 1e-14.
template <class F>
double poisson_series(double mean, F fn)
{
    const PoissonLaw law(mean);
    const auto& w = law.weights();
    long double s = 0;
    for (std::size_t k = 0; k < w.size(); ++k)
        s += static_cast<long double>(w[k]) * fn(static_cast<double>(k));
    double wk = w.back();
    for (std::size_t k = w.size(); k < w.size() + 10000; ++k) {
        wk *= mean / static_cast<double>(k);
        const double term = wk * fn(static_cast<double>(k));
        s += term;
        if (std::abs(term) < 1e-14)
            break;
    }
    return static_cast<double>(s);
}

inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

} // namespace detail

/// Σ f_k(β) log2(1 + kγ).
inline double c_opt_th_ns1(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    return detail::poisson_series(beta, [&](double k) { return detail::log2_1p(k * gamma); });
}

/// ∫ log2(1 + λγ) dμ_MP(λ) by quadrature.
inline double c_opt_ds(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    if (gamma == 0.0)
        return 0.0;
    const MarchenkoPasturLaw law(beta);
    const double tol = 1e-10 * std::min(1.0, beta * gamma);
    return law.integrate([&](double x) { return detail::log2_1p(gamma * x); }, tol).value;
}

/// Closed form of the same integral, used as a cross-check.
inline double c_opt_ds_closed_form(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    const double sb = std::sqrt(beta);
    const double a = std::sqrt(gamma * (1.0 + sb) * (1.0 + sb) + 1.0);
    const double b = std::sqrt(gamma * (1.0 - sb) * (1.0 - sb) + 1.0);
    const double f = (a - b) * (a - b);
    return beta * std::log2(1.0 + gamma - f / 4.0) + std::log2(1.0 + gamma * beta - f / 4.0)
         - f / (4.0 * gamma * std::numbers::ln2);
}

/// β log2(1 + γ/(1 + βγ)).
inline double sumf_ds(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    return beta * detail::log2_1p(gamma / (1.0 + beta * gamma));
}

/// β Σ Pois(Ns²β)(k) log2(1 + γ/(1 + kγ/Ns²)).
inline double sumf_th_knownS(double beta, double gamma, std::size_t ns)
{
    detail::check_beta_gamma(beta, gamma);
    require(ns >= 1, "Ns must be >= 1");
    const double n2 = static_cast<double>(ns) * static_cast<double>(ns);
    return beta
         * detail::poisson_series(beta * n2, [&](double k) { return detail::log2_1p(gamma / (1.0 + k * gamma / n2)); });
}

/// β [h(P_Y) - h(P_Z)]: SUMF mutual information when the decoder ignores the signatures.
inline double sumf_th_star(double beta, double gamma, std::size_t ns)
{
    detail::check_beta_gamma(beta, gamma);
    require(ns >= 1, "Ns must be >= 1");
    if (gamma == 0.0)
        return 0.0;
    return beta * mixture_entropy_difference(mixture_py(beta, gamma, ns), mixture_pz(beta, gamma, ns));
}

/// Ns = αN with N -> ∞: identical to the DS formula for every α.
inline double sumf_th_dense_limit(double beta, double gamma) { return sumf_ds(beta, gamma); }

/// β log2(1 + γ(1 - β)), β < 1.
inline double deco_ds(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    require(beta < 1.0, "deco_ds requires beta < 1");
    return beta * detail::log2_1p(gamma * (1.0 - beta));
}

/// β log2(1 + γ - F/4), F = (√(1+γℓ+) - √(1+γℓ-))².
inline double mmse_ds(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    const MarchenkoPasturLaw law(beta);
    const double d = std::sqrt(1.0 + gamma * law.upper()) - std::sqrt(1.0 + gamma * law.lower());
    return beta * std::log2(1.0 + gamma - d * d / 4.0);
}

/// β Σ f_k(β) log2(1 + γ/(kγ + 1)): decorrelator, MMSE and SUMF coincide for TH with Ns = 1.
inline double linear_th_ns1(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    return beta * detail::poisson_series(beta, [&](double k) { return detail::log2_1p(gamma / (k * gamma + 1.0)); });
}

/// log2(1 + βγ): orthogonal signalling with the same total power.
inline double orthogonal(double beta, double gamma)
{
    detail::check_beta_gamma(beta, gamma);
    return detail::log2_1p(beta * gamma);
}

// ---------------------------------------------------------------------------
// Formula registry

enum class Formula {
    c_opt_th_ns1,
    c_opt_ds,
    sumf_ds,
    sumf_th_knownS,
    sumf_th_star,
    sumf_th_dense_limit,
    deco_ds,
    mmse_ds,
    linear_th_ns1,
    orthogonal,
};

struct FormulaInfo {
    Formula id;
    std::string_view name;
    std::string_view precondition;
    bool uses_ns;
};

inline constexpr FormulaInfo formula_table[] = {
    {Formula::c_opt_th_ns1, "c_opt_th_ns1", "beta > 0, gamma > 0", false},
    {Formula::c_opt_ds, "c_opt_ds", "beta > 0, gamma > 0", false},
    {Formula::sumf_ds, "sumf_ds", "beta > 0, gamma >= 0", false},
    {Formula::sumf_th_knownS, "sumf_th_knownS", "beta > 0, gamma >= 0, Ns >= 1", true},
    {Formula::sumf_th_star, "sumf_th_star", "beta > 0, gamma >= 0, Ns >= 1", true},
    {Formula::sumf_th_dense_limit, "sumf_th_dense_limit", "beta > 0, gamma >= 0", false},
    {Formula::deco_ds, "deco_ds", "0 < beta < 1, gamma >= 0", false},
    {Formula::mmse_ds, "mmse_ds", "beta > 0, gamma >= 0", false},
    {Formula::linear_th_ns1, "linear_th_ns1", "beta > 0, gamma >= 0", false},
    {Formula::orthogonal, "orthogonal", "beta > 0, gamma >= 0", false},
};

inline const FormulaInfo& info(Formula f)
{
    for (const auto& i : formula_table)
        if (i.id == f)
            return i;
    throw DomainError("unknown formula");
}

inline Formula parse_formula(std::string_view name)
{
    for (const auto& i : formula_table)
        if (i.name == name)
            return i.id;
    std::string known;
    for (const auto& i : formula_table)
        known += (known.empty() ? "" : ", ") + std::string(i.name);
    throw DomainError("unknown formula '" + std::string(name) + "' (known: " + known + ")");
}

inline double evaluate(Formula f, double beta, double gamma, std::size_t ns = 1)
{
    switch (f) {
    case Formula::c_opt_th_ns1: return c_opt_th_ns1(beta, gamma);
    case Formula::c_opt_ds: return c_opt_ds(beta, gamma);
    case Formula::sumf_ds: return sumf_ds(beta, gamma);
    case Formula::sumf_th_knownS: return sumf_th_knownS(beta, gamma, ns);
    case Formula::sumf_th_star: return sumf_th_star(beta, gamma, ns);
    case Formula::sumf_th_dense_limit: return sumf_th_dense_limit(beta, gamma);
    case Formula::deco_ds: return deco_ds(beta, gamma);
    case Formula::mmse_ds: return mmse_ds(beta, gamma);
    case Formula::linear_th_ns1: return linear_th_ns1(beta, gamma);
    case Formula::orthogonal: return orthogonal(beta, gamma);
    }
    throw DomainError("unknown formula");
}

/// Domain errors get the formula's precondition appended.
inline double evaluate_checked(Formula f, double beta, double gamma, std::size_t ns = 1)
{
    try {
        return evaluate(f, beta, gamma, ns);
    } catch (const DomainError& e) {
        throw DomainError(std::string(info(f).name) + ": " + e.what() + " (precondition: "
                          + std::string(info(f).precondition) + ")");
    }
}

using Curve = std::function<double(double)>;

/// γ -> C(γ) at fixed β (and Ns).
inline Curve bind(Formula f, double beta, std::size_t ns = 1)
{
    return [=](double gamma) { return evaluate_checked(f, beta, gamma, ns); };
}

// ---------------------------------------------------------------------------
// E_b/N0

inline double to_db(double x) { return 10.0 * std::log10(x); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// η = βγ / C(γ).
inline double ebn0(double beta, double gamma, double c) { return beta * gamma / c; }

/// Log-spaced γ grid, `per_decade` points per decade, endpoints included.
inline std::vector<double> log_grid(double lo, double hi, unsigned per_decade)
{
    require(lo > 0.0 && hi > lo && per_decade > 0, "log_grid: need 0 < lo < hi");
    const double a = std::log10(lo), b = std::log10(hi);
    const auto n = static_cast<std::size_t>(std::ceil((b - a) * per_decade));
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
    return g;
}

/// Parametric map γ -> (η in dB, C), sorted by η. Throws if C is not positive and increasing.
inline SweepResult ebn0_curve(const Curve& curve, double beta, std::vector<double> gammas, std::string name = "curve")
{
    require(beta > 0.0, "ebn0_curve: beta must be positive");
    require(!gammas.empty(), "ebn0_curve: empty grid");
    std::sort(gammas.begin(), gammas.end());
    SweepResult r;
    r.name = std::move(name);
    r.x_label = "ebn0_db";
    r.y_label = "C";
    double prev = 0.0;
    for (double g : gammas) {
        require(g > 0.0, "ebn0_curve: gamma must be positive");
        const double c = curve(g);
        if (!(c > 0.0) || c < prev) {
            std::ostringstream msg;
            msg << "ebn0_curve: C(gamma) not positive and nondecreasing at gamma=" << g << " (C=" << c
                << ", previous " << prev << ")";
            throw NumericalError(msg.str());
        }
        prev = c;
        r.x.push_back(to_db(ebn0(beta, g, c)));
        r.mean.push_back(c);
    }
    // η(γ) is nondecreasing for concave C; sort anyway so the output contract holds.
    std::vector<std::size_t> idx(r.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.x[a] < r.x[b]; });
    SweepResult s = r;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        s.x[i] = r.x[idx[i]];
        s.mean[i] = r.mean[idx[i]];
    }
    return s;
}

struct EbN0Point {
    double gamma = 0.0; // 0 when η is at or below η_min
    double capacity = 0.0;
};

inline constexpr double gamma_floor = 1e-8;
inline constexpr double gamma_ceiling = 1e12;

/// Operating point with E_b/N0 = `db`: solves η(γ) = target for γ in [1e-8, 1e12].
inline EbN0Point at_ebn0(const Curve& curve, double beta, double db)
{
    const double target = from_db(db);
    auto log_eta = [&](double t) {
        const double g = std::exp(t);
        return std::log(ebn0(beta, g, curve(g))) - std::log(target);
    };
    const double lo = std::log(gamma_floor), hi = std::log(gamma_ceiling);
    const double flo = log_eta(lo);
    if (flo >= 0.0)
        return {};
    const double fhi = log_eta(hi);
    if (fhi < 0.0)
        throw DomainError("at_ebn0: E_b/N0 = " + std::to_string(db) + " dB lies beyond gamma = 1e12");
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(log_eta, lo, hi, flo, fhi,
                                                         boost::math::tools::eps_tolerance<double>(50), iters);
    const double g = std::exp(0.5 * (a + b));
    return {g, curve(g)};
}

/// C at each E_b/N0 in `grid_db`. A coarse parametric scan (one point per decade of γ)
/// brackets every target, then η(γ) = target is solved inside the bracket. Targets
/// at or below η(1e-8) ≈ η_min get C = 0.
inline std::vector<EbN0Point> ebn0_on_grid(const Curve& curve, double beta, const std::vector<double>& grid_db)
{
    std::vector<EbN0Point> out(grid_db.size());
    if (grid_db.empty())
        return out;
    const double top = from_db(*std::max_element(grid_db.begin(), grid_db.end()));
    std::vector<double> lg, eta;
    double prev_c = 0.0;
    for (double t = std::log(gamma_floor);; t += std::log(10.0)) {
        const double g = std::exp(t);
        const double c = curve(g);
        if (!(c > 0.0) || c < prev_c)
            throw NumericalError("ebn0_on_grid: C(gamma) not positive and nondecreasing at gamma=" + std::to_string(g));
        prev_c = c;
        lg.push_back(t);
        eta.push_back(ebn0(beta, g, c));
        if (eta.back() > top)
            break;
        if (g > gamma_ceiling)
            throw DomainError("ebn0_on_grid: E_b/N0 grid extends beyond gamma = 1e12");
    }
    for (std::size_t i = 0; i < grid_db.size(); ++i) {
        const double target = from_db(grid_db[i]);
        if (target <= eta.front())
            continue;
        const auto it = std::lower_bound(eta.begin(), eta.end(), target);
        const std::size_t hi = static_cast<std::size_t>(it - eta.begin());
        if (eta[hi] == target) {
            const double g = std::exp(lg[hi]);
            out[i] = {g, curve(g)};
            continue;
        }
        auto f = [&](double t) {
            const double g = std::exp(t);
            return std::log(ebn0(beta, g, curve(g))) - std::log(target);
        };
        std::uintmax_t iters = 100;
        const auto [a, b] = boost::math::tools::toms748_solve(f, lg[hi - 1], lg[hi], std::log(eta[hi - 1] / target),
                                                             std::log(eta[hi] / target),
                                                             boost::math::tools::eps_tolerance<double>(40), iters);
        const double g = std::exp(0.5 * (a + b));
        out[i] = {g, curve(g)};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotic parameters

struct AsymptoticParams {
    double eta_min = 0.0; // linear
    double s0 = 0.0;      // b/s/Hz per 3 dB
    double s_inf = 0.0;   // b/s/Hz per 3 dB
    std::optional<double> l_inf; // 3-dB units
    bool converged = true; // high-SNR slope stable across the two γ windows
};

inline constexpr double wideband_gamma = 1e-8;
inline constexpr double wideband_step = 1e-4;

/// η_min = βγ/C at γ = 1e-8.
inline double numeric_eta_min(const Curve& curve, double beta) { return ebn0(beta, wideband_gamma, curve(wideband_gamma)); }

/// S0 = -2 ln2 C'(0)² / C''(0) from C(h), C(2h) with C(0) = 0.
inline double numeric_s0(const Curve& curve, double h = wideband_step)
{
    const double c1 = curve(h), c2 = curve(2.0 * h);
    const double d1 = (4.0 * c1 - c2) / (2.0 * h);
    const double d2 = (c2 - 2.0 * c1) / (h * h);
    return -2.0 * std::numbers::ln2 * d1 * d1 / d2;
}

struct SlopeEstimate {
    double slope = 0.0;
    double previous = 0.0; // same estimate one window lower
    bool converged = true;
};

/// dC / dlog2γ between 2^18 and 2^22, checked against the 2^14..2^18 window.
inline SlopeEstimate numeric_s_inf(const Curve& curve)
{
    const double c14 = curve(std::ldexp(1.0, 14));
    const double c18 = curve(std::ldexp(1.0, 18));
    const double c22 = curve(std::ldexp(1.0, 22));
    SlopeEstimate s;
    s.slope = (c22 - c18) / 4.0;
    s.previous = (c18 - c14) / 4.0;
    s.converged = std::abs(s.slope - s.previous) <= 0.01 * std::max(std::abs(s.slope), 1e-3);
    return s;
}

inline AsymptoticParams asymptotics(const Curve& curve, double beta)
{
    AsymptoticParams p;
    p.eta_min = numeric_eta_min(curve, beta);
    p.s0 = numeric_s0(curve);
    const SlopeEstimate s = numeric_s_inf(curve);
    p.s_inf = std::max(0.0, s.slope);
    p.converged = s.converged;
    if (p.s_inf > 1e-6) {
        const double g = std::ldexp(1.0, 22);
        p.l_inf = std::log2(beta) + std::log2(g) - curve(g) / p.s_inf;
    }
    return p;
}

/// Closed forms for TH with Ns = 1 under optimum decoding.
inline AsymptoticParams th_ns1_asymptotics(double beta)
{
    require(beta > 0.0, "th_ns1_asymptotics: beta must be positive");
    AsymptoticParams p;
    p.eta_min = std::numbers::ln2;
    p.s0 = 2.0 * beta / (1.0 + beta);
    p.s_inf = -std::expm1(-beta);
    const double tail = detail::poisson_series(beta, [](double k) { return k > 1.0 ? std::log2(k) : 0.0; });
    p.l_inf = std::log2(beta) - tail / p.s_inf;
    return p;
}

/// 2β/(1+2β): wideband slope of every SUMF curve.
inline double sumf_wideband_slope(double beta) { return 2.0 * beta / (1.0 + 2.0 * beta); }

/// βe^{-Ns²β}: high-SNR slope of sumf_th_knownS.
inline double sumf_th_knownS_slope(double beta, std::size_t ns)
{
    const double n2 = static_cast<double>(ns) * static_cast<double>(ns);
    return beta * std::exp(-n2 * beta);
}

} // namespace thspeff
