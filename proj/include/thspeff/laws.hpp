// SPDX-License-Identifier: Apache-2.0
//
// Limiting eigenvalue laws of the two ensembles and their moments:
//   TH, Ns = 1 : Poisson(β) point masses at the integers,
//   DS         : Marchenko-Pastur law, atom (1-β)+ at 0 plus a density on [ℓ-, ℓ+].
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "error.hpp"
#include "quadrature.hpp"

namespace thspeff {

using uint128 = unsigned __int128;

/// Exact Stirling numbers of the second kind {L, l} and Narayana numbers N_l(L), 0 <= l <= L <= L_max.
class MomentTable {
public:
    static constexpr unsigned max_order = 20;

    static const MomentTable& instance()
    {
        static const MomentTable table;
        return table;
    }

    uint128 stirling2(unsigned n, unsigned l) const
    {
        check(n);
        return l > n ? 0 : stirling_[n][l];
    }

    uint128 narayana(unsigned n, unsigned l) const
    {
        check(n);
        return l > n ? 0 : narayana_[n][l];
    }

    /// Σ_l {n, l}: number of set partitions.
    uint128 bell(unsigned n) const
    {
        uint128 s = 0;
        for (unsigned l = 0; l <= n; ++l)
            s += stirling2(n, l);
        return s;
    }

    /// Σ_l N_l(n): the Catalan number C_n.
    uint128 catalan(unsigned n) const
    {
        uint128 s = 0;
        for (unsigned l = 0; l <= n; ++l)
            s += narayana(n, l);
        return s;
    }

private:
    MomentTable()
    {
        stirling_[0][0] = 1;
        for (unsigned n = 1; n <= max_order; ++n)
            for (unsigned l = 1; l <= n; ++l) {
                uint128 t = 0, out = 0;
                if (__builtin_mul_overflow(static_cast<uint128>(l), stirling_[n - 1][l], &t)
                    || __builtin_add_overflow(t, stirling_[n - 1][l - 1], &out))
                    throw NumericalError("MomentTable: Stirling overflow");
                stirling_[n][l] = out;
            }
        std::vector<std::vector<uint128>> binom(max_order + 1, std::vector<uint128>(max_order + 1, 0));
        for (unsigned n = 0; n <= max_order; ++n) {
            binom[n][0] = 1;
            for (unsigned k = 1; k <= n; ++k)
                binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
        }
        narayana_[0][0] = 1;
        for (unsigned n = 1; n <= max_order; ++n)
            for (unsigned l = 1; l <= n; ++l) {
                uint128 p = 0;
                if (__builtin_mul_overflow(binom[n][l], binom[n][l - 1], &p))
                    throw NumericalError("MomentTable: Narayana overflow");
                narayana_[n][l] = p / n;
            }
    }

    static void check(unsigned n)
    {
        if (n > max_order)
            throw NumericalError("MomentTable: order " + std::to_string(n) + " exceeds exact table limit "
                                 + std::to_string(max_order));
    }

    uint128 stirling_[max_order + 1][max_order + 1] = {};
    uint128 narayana_[max_order + 1][max_order + 1] = {};
};

namespace detail {

/// Σ_l c_l β^l (Horner), c_l taken from an exact table.
template <class Coef>
double table_polynomial(unsigned order, double beta, Coef coef)
{
    long double acc = 0;
    for (unsigned l = order; l >= 1; --l)
        acc = acc * beta + static_cast<long double>(coef(l));
    return static_cast<double>(acc * beta);
}

inline void check_moment_order(unsigned order)
{
    require(order >= 1, "moment order must be >= 1");
    if (order > MomentTable::max_order)
        throw NumericalError("moment order " + std::to_string(order) + " exceeds exact table limit "
                             + std::to_string(MomentTable::max_order));
}

} // namespace detail

/// Poisson law with mean β, truncated at k_max with tail mass < 1e-12.
class PoissonLaw {
public:
    static constexpr double tail_mass = 1e-12;

    explicit PoissonLaw(double beta) : beta_(beta)
    {
        require(std::isfinite(beta) && beta >= 0.0, "PoissonLaw: beta must be finite and >= 0");
        std::size_t k = static_cast<std::size_t>(std::ceil(beta + 12.0 * std::sqrt(beta) + 30.0));
        if (beta > 0.0)
            while (boost::math::gamma_p(static_cast<double>(k + 1), beta) >= tail_mass)
                ++k;
        kmax_ = k;
        weights_.resize(kmax_ + 1);
        for (std::size_t j = 0; j <= kmax_; ++j)
            weights_[j] = pmf(j);
    }

    double beta() const noexcept { return beta_; }
    std::size_t kmax() const noexcept { return kmax_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// f_k(β) = β^k e^{-β} / k!, in the log domain.
    double pmf(std::size_t k) const
    {
        if (k == 0)
            return std::exp(-beta_);
        if (beta_ == 0.0)
            return 0.0;
        const double kk = static_cast<double>(k);
        return std::exp(kk * std::log(beta_) - beta_ - boost::math::lgamma(kk + 1.0));
    }

    /// Right-continuous CDF.
    double cdf(double x) const
    {
        if (x < 0.0)
            return 0.0;
        const double fl = std::floor(x);
        if (fl >= static_cast<double>(kmax_))
            return 1.0 - tail();
        long double s = 0;
        for (std::size_t k = 0; k <= static_cast<std::size_t>(fl); ++k)
            s += weights_[k];
        return static_cast<double>(s);
    }

    double tail() const { return beta_ == 0.0 ? 0.0 : boost::math::gamma_p(static_cast<double>(kmax_ + 1), beta_); }

    /// Σ_l {L, l} β^l.
    double moment(unsigned order) const
    {
        detail::check_moment_order(order);
        const auto& t = MomentTable::instance();
        return detail::table_polynomial(order, beta_, [&](unsigned l) { return t.stirling2(order, l); });
    }

    /// Σ_k f_k fn(k) over the truncated support.
    template <class F>
    double expect(F fn) const
    {
        long double s = 0;
        for (std::size_t k = 0; k <= kmax_; ++k)
            s += static_cast<long double>(weights_[k]) * fn(static_cast<double>(k));
        return static_cast<double>(s);
    }

private:
    double beta_;
    std::size_t kmax_ = 0;
    std::vector<double> weights_;
};

/// Marchenko-Pastur law of S Sᵀ for the DS ensemble with load β.
class MarchenkoPasturLaw {
public:
    explicit MarchenkoPasturLaw(double beta) : beta_(beta)
    {
        require(std::isfinite(beta) && beta > 0.0, "MarchenkoPasturLaw: beta must be finite and > 0");
    }

    double beta() const noexcept { return beta_; }
    double lower() const noexcept { return (1.0 - std::sqrt(beta_)) * (1.0 - std::sqrt(beta_)); }
    double upper() const noexcept { return (1.0 + std::sqrt(beta_)) * (1.0 + std::sqrt(beta_)); }
    double atom() const noexcept { return std::max(0.0, 1.0 - beta_); }

    double density(double x) const
    {
        require(x >= 0.0, "mp_density: x must be >= 0");
        const double lo = lower(), hi = upper();
        if (x <= lo || x >= hi || x == 0.0)
            return 0.0;
        return std::sqrt((hi - x) * (x - lo)) / (2.0 * std::numbers::pi * x);
    }

    /// Σ_l N_l(L) β^l.
    double moment(unsigned order) const
    {
        detail::check_moment_order(order);
        const auto& t = MomentTable::instance();
        return detail::table_polynomial(order, beta_, [&](unsigned l) { return t.narayana(order, l); });
    }

    /// atom·fn(0) + ∫ fn(x) f(x) dx. The continuous part uses x = (1+β) - 2√β cos θ,
    /// which turns the square-root edges into a smooth integrand on [0, π].
    template <class F>
    QuadratureResult integrate(F fn, double abs_tol = 1e-10) const
    {
        const double sb = std::sqrt(beta_);
        const double r = 2.0 * sb;
        const double lo = (1.0 - sb) * (1.0 - sb);
        auto g = [&](double theta) {
            const double s = std::sin(theta);
            const double h = std::sin(0.5 * theta);
            const double x = lo + 2.0 * r * h * h; // (1+β) - r cos θ without cancellation near θ = 0

            if (!(x > 0.0))
                return 0.0;
            return fn(x) * r * r * s * s / (2.0 * std::numbers::pi * x);
        };
        QuadratureResult q = thspeff::integrate(g, 0.0, std::numbers::pi, {abs_tol, 20000});
        if (atom() > 0.0)
            q.value += atom() * fn(0.0);
        return q;
    }

private:
    double beta_;
};

inline double poisson_pmf(const PoissonLaw& law, std::size_t k) { return law.pmf(k); }
inline double poisson_moment(const PoissonLaw& law, unsigned order) { return law.moment(order); }
inline double mp_density(const MarchenkoPasturLaw& law, double x) { return law.density(x); }
inline double mp_moment(const MarchenkoPasturLaw& law, unsigned order) { return law.moment(order); }

/// E[m_L] at finite N for TH with Ns = 1: Σ_l {L, l} K!/(K-l)! N^{-l}.
inline double expected_moment_finite(std::size_t n, std::size_t k, unsigned order)
{
    require(n > 0 && k > 0, "expected_moment_finite: N and K must be positive");
    detail::check_moment_order(order);
    const auto& t = MomentTable::instance();
    long double acc = 0, falling = 1;
    for (unsigned l = 1; l <= order; ++l) {
        if (l > k)
            break;
        falling *= static_cast<long double>(k - (l - 1)) / static_cast<long double>(n);
        acc += static_cast<long double>(t.stirling2(order, l)) * falling;
    }
    return static_cast<double>(acc);
}

/// Limiting normalized rank for Ns = 1.
inline double rank_limit(double beta) { return -std::expm1(-beta); }

/// min{β, 1 - e^{-Ns β}}.
inline double rank_upper_bound(double beta, std::size_t ns)
{
    return std::min(beta, -std::expm1(-static_cast<double>(ns) * beta));
}

} // namespace thspeff
