// SPDX-License-Identifier: Apache-2.0
//
// Zero-mean circularly-symmetric complex Gaussian mixtures and their
// differential entropy. A component with variance σ² has density
// exp(-|z|²/σ²) / (πσ²). Circular symmetry reduces every integral to one over
// u = |z|² (area element π du); u = e^t then gives a smooth integrand on a
// finite t-range.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "error.hpp"
#include "laws.hpp"
#include "quadrature.hpp"

namespace thspeff {

struct GaussianMixture {
    std::vector<double> weights;
    std::vector<double> variances;

    std::size_t size() const noexcept { return weights.size(); }

    void validate() const
    {
        require(!weights.empty() && weights.size() == variances.size(), "GaussianMixture: weights/variances mismatch");
        double s = 0.0;
        for (std::size_t k = 0; k < size(); ++k) {
            require(weights[k] >= 0.0, "GaussianMixture: negative weight");
            require(variances[k] > 0.0 && std::isfinite(variances[k]), "GaussianMixture: variances must be positive");
            s += weights[k];
        }
        require(std::abs(s - 1.0) <= 1e-9, "GaussianMixture: weights must sum to 1");
    }

    /// E|Z|^2.
    double second_moment() const
    {
        long double s = 0;
        for (std::size_t k = 0; k < size(); ++k)
            s += static_cast<long double>(weights[k]) * variances[k];
        return static_cast<double>(s);
    }

    /// E|Z|^4 (2σ⁴ per component).
    double fourth_moment() const
    {
        long double s = 0;
        for (std::size_t k = 0; k < size(); ++k)
            s += 2.0L * weights[k] * variances[k] * variances[k];
        return static_cast<double>(s);
    }

    double kurtosis() const
    {
        const double m2 = second_moment();
        return fourth_moment() / (m2 * m2);
    }

    /// ln p(z) at |z|² = u, via log-sum-exp.
    double log_density(double u) const
    {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < size(); ++k)
            if (weights[k] > 0.0)
                top = std::max(top, log_term(k, u));
        long double s = 0;
        for (std::size_t k = 0; k < size(); ++k)
            if (weights[k] > 0.0)
                s += std::exp(log_term(k, u) - top);
        return top + static_cast<double>(std::log(s));
    }

    /// Density of Re Z, each component N(0, σ²/2).
    double real_marginal_density(double x) const
    {
        long double s = 0;
        for (std::size_t k = 0; k < size(); ++k)
            s += weights[k] * std::exp(-x * x / variances[k]) / std::sqrt(std::numbers::pi * variances[k]);
        return static_cast<double>(s);
    }

private:
    double log_term(std::size_t k, double u) const
    {
        return std::log(weights[k]) - std::log(std::numbers::pi * variances[k]) - u / variances[k];
    }
};

namespace detail {

/// Poisson(mean)-weighted components with variance base + k * step, truncated per PoissonLaw.
inline GaussianMixture poisson_mixture(double mean, double base, double step)
{
    const PoissonLaw law(mean);
    GaussianMixture m;
    if (step == 0.0) {
        m.weights = {1.0};
        m.variances = {base};
        return m;
    }
    const auto& w = law.weights();
    m.weights.assign(w.begin(), w.end());
    // Put the truncated tail on the last component so weights sum to one.
    long double s = 0;
    for (double x : m.weights)
        s += x;
    m.weights.back() = std::max(0.0, m.weights.back() + static_cast<double>(1.0L - s));
    m.variances.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        m.variances[k] = base + static_cast<double>(k) * step;
    return m;
}

inline void check_mixture_args(double beta, double gamma, std::size_t ns)
{
    require(beta > 0.0 && std::isfinite(beta), "mixture: beta must be positive");
    require(gamma >= 0.0 && std::isfinite(gamma), "mixture: gamma must be >= 0");
    require(ns >= 1, "mixture: Ns must be >= 1");
}

inline std::pair<double, double> log_range(const GaussianMixture& a)
{
    const auto [lo, hi] = std::minmax_element(a.variances.begin(), a.variances.end());
    return {std::log(*lo) - 40.0, std::log(*hi * 80.0)};
}

inline std::vector<double> log_breaks(const std::vector<const GaussianMixture*>& mixes)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<double> b;
    for (const auto* m : mixes) {
        const auto [l, h] = log_range(*m);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
        for (std::size_t k = 0; k < m->size(); ++k)
            if (m->weights[k] > 1e-9)
                b.push_back(std::log(m->variances[k]));
    }
    b.push_back(lo);
    b.push_back(hi);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), b.end());
    return b;
}

/// Integrand of h in bits over t = ln|z|²:  -π e^t p log2 p.
inline double entropy_integrand(const GaussianMixture& m, double t)
{
    const double u = std::exp(t);
    const double lp = m.log_density(u);
    if (!std::isfinite(lp))
        return 0.0;
    return -std::numbers::pi * u * std::exp(lp) * lp / std::numbers::ln2;
}

} // namespace detail

/// Z: SUMF interference plus noise. Weights Poisson(β Ns²), variances 1 + kγ/Ns².
inline GaussianMixture mixture_pz(double beta, double gamma, std::size_t ns)
{
    detail::check_mixture_args(beta, gamma, ns);
    const double n2 = static_cast<double>(ns) * static_cast<double>(ns);
    return detail::poisson_mixture(beta * n2, 1.0, gamma / n2);
}

/// Y: desired symbol plus Z. Variances 1 + γ + kγ/Ns².
inline GaussianMixture mixture_py(double beta, double gamma, std::size_t ns)
{
    detail::check_mixture_args(beta, gamma, ns);
    const double n2 = static_cast<double>(ns) * static_cast<double>(ns);
    return detail::poisson_mixture(beta * n2, 1.0 + gamma, gamma / n2);
}

/// κ_Z = 2 + (2/Ns²) βγ²/(1+βγ)².
inline double kurtosis_pz(double beta, double gamma, std::size_t ns)
{
    const double n2 = static_cast<double>(ns) * static_cast<double>(ns);
    const double x = beta * gamma / (1.0 + beta * gamma);
    return 2.0 + 2.0 / n2 * x * x / beta;
}

inline constexpr double entropy_tolerance = 1e-10;

/// Differential entropy in bits.
inline double mixture_entropy(const GaussianMixture& m, double abs_tol = entropy_tolerance)
{
    m.validate();
    auto f = [&](double t) { return detail::entropy_integrand(m, t); };
    return integrate(f, detail::log_breaks({&m}), {abs_tol, 50000}).value;
}

/// h(a) - h(b) as one integral, so the result keeps relative accuracy when it is small.
inline double mixture_entropy_difference(const GaussianMixture& a, const GaussianMixture& b, double rel_tol = 1e-9)
{
    a.validate();
    b.validate();
    auto f = [&](double t) { return detail::entropy_integrand(a, t) - detail::entropy_integrand(b, t); };
    // Cancellation between the two integrands leaves roundoff near 1e-13 absolute.
    return integrate(f, detail::log_breaks({&a, &b}), {2e-12, 50000, rel_tol, entropy_tolerance}).value;
}

/// E|Z|^{2p} by quadrature over the same radial reduction.
inline double mixture_moment_quadrature(const GaussianMixture& m, unsigned p, double rel_tol = 1e-12)
{
    m.validate();
    auto f = [&](double t) {
        const double u = std::exp(t);
        return std::numbers::pi * std::pow(u, p + 1) * std::exp(m.log_density(u));
    };
    auto breaks = detail::log_breaks({&m});
    breaks.back() += std::log(4.0 * (p + 1)); // heavier weighting pushes mass outward
    const double scale = p == 1 ? m.second_moment() : m.fourth_moment();
    return integrate(f, breaks, {rel_tol * scale, 50000}).value;
}

struct EntropyBounds {
    double gaussian = 0.0; // h_G = Σ w log2(πeσ²)
    double poisson = 0.0;  // h_P = -Σ w log2 w
    double lower() const noexcept { return gaussian; }
    double upper() const noexcept { return gaussian + poisson; }
};

inline EntropyBounds entropy_bounds(const GaussianMixture& m)
{
    m.validate();
    long double g = 0, p = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double w = m.weights[k];
        if (w <= 0.0)
            continue;
        g += w * std::log2(std::numbers::pi * std::numbers::e * m.variances[k]);
        p -= w * std::log2(w);
    }
    return {static_cast<double>(g), static_cast<double>(p)};
}

} // namespace thspeff
