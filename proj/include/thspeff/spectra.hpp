// SPDX-License-Identifier: Apache-2.0
//
// Gram-matrix spectra of one realization: eigenvalues of S Sᵀ, the empirical
// spectral distribution, its moments, the normalized rank and the log-det
// capacity functional (1/N) log2 det(I + γ S Sᵀ).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ensembles.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace thspeff {

inline constexpr unsigned default_max_moment = 8;

/// Users per chip (diagonal of S Sᵀ) for Ns = 1.
inline std::vector<std::size_t> chip_occupancy(const SpreadingMatrix& m)
{
    require(m.single_pulse(), "chip_occupancy: requires Ns = 1");
    std::vector<std::size_t> counts(m.rows(), 0);
    for (std::size_t k = 0; k < m.cols(); ++k)
        ++counts[m.pulse(k, 0).slot];
    return counts;
}

/// Sᵀ S (K x K), built from pulse collisions so TH entries are exact multiples of 1/Ns.
inline DenseMatrix user_gram(const SpreadingMatrix& m)
{
    const std::size_t k = m.cols();
    const double inv_ns = 1.0 / static_cast<double>(m.pulses_per_symbol());
    DenseMatrix r(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        r(j, j) = 1.0;
        for (std::size_t i = j + 1; i < k; ++i) {
            const long c = m.signed_collisions(i, j);
            r(i, j) = r(j, i) = static_cast<double>(c) * inv_ns;
        }
    }
    return r;
}

/// S Sᵀ (N x N).
inline DenseMatrix chip_gram(const SpreadingMatrix& m)
{
    const std::size_t n = m.rows();
    const std::size_t ns = m.pulses_per_symbol();
    const double inv_ns = 1.0 / static_cast<double>(ns);
    // Accumulate signed integer counts first, then scale once.
    std::vector<long> counts(n * n, 0);
    std::vector<std::size_t> rows(ns);
    std::vector<int> signs(ns);
    for (std::size_t k = 0; k < m.cols(); ++k) {
        for (std::size_t b = 0; b < ns; ++b) {
            rows[b] = m.row_of(k, b);
            signs[b] = m.pulse(k, b).sign;
        }
        for (std::size_t a = 0; a < ns; ++a)
            for (std::size_t b = 0; b < ns; ++b)
                counts[rows[b] * n + rows[a]] += signs[a] * signs[b];
    }
    DenseMatrix g(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            g(i, j) = static_cast<double>(counts[j * n + i]) * inv_ns;
    return g;
}

/// The smaller of Sᵀ S and S Sᵀ; both share the nonzero spectrum.
inline DenseMatrix reduced_gram(const SpreadingMatrix& m)
{
    return m.cols() < m.rows() ? user_gram(m) : chip_gram(m);
}

/// Eigenvalues of S Sᵀ in ascending order (length N). Exact chip counts when Ns = 1.
inline std::vector<double> gram_eigenvalues(const SpreadingMatrix& m)
{
    std::vector<double> eig;
    eig.reserve(m.rows());
    if (m.single_pulse()) {
        for (std::size_t c : chip_occupancy(m))
            eig.push_back(static_cast<double>(c));
    } else {
        const EigenDecomposition ed = symmetric_eigen(reduced_gram(m));
        eig = ed.values;
        // Roundoff can push zero eigenvalues slightly negative.
        for (double& v : eig)
            v = std::max(v, 0.0);
        eig.resize(m.rows(), 0.0);
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

struct SpectralSummary {
    std::vector<double> eigenvalues; // ascending, length N
    std::vector<double> moments;     // moments[L-1] = m_L, L = 1..max_moment
    double normalized_rank = 0.0;
    std::size_t users = 0;

    std::size_t chips() const noexcept { return eigenvalues.size(); }
    double load() const noexcept { return static_cast<double>(users) / static_cast<double>(chips()); }
    unsigned max_moment() const noexcept { return static_cast<unsigned>(moments.size()); }

    /// Empirical spectral distribution: fraction of eigenvalues <= x.
    double esd(double x) const
    {
        const auto it = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), x);
        return static_cast<double>(it - eigenvalues.begin()) / static_cast<double>(chips());
    }
};

namespace detail {

inline double exact_count_moment(const std::vector<std::size_t>& counts, unsigned order)
{
    unsigned __int128 sum = 0;
    for (std::size_t c : counts) {
        unsigned __int128 p = 1;
        for (unsigned l = 0; l < order; ++l)
            p *= c;
        sum += p;
    }
    return static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(counts.size()));
}

inline double rank_threshold(const std::vector<double>& eig, std::size_t n)
{
    const double lmax = eig.empty() ? 0.0 : eig.back();
    return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lmax;
}

} // namespace detail

/// (1/N) Σ λ_n^L.
inline double esd_moment(const SpectralSummary& s, unsigned order)
{
    require(order >= 1 && order <= s.max_moment(), "esd_moment: order outside 1..L_max");
    return s.moments[order - 1];
}

/// rank(S) / N. Ns = 1 counts non-empty chips; otherwise eigenvalues of the
/// reduced Gram above N * eps * λ_max.
inline double normalized_rank(const SpreadingMatrix& m)
{
    if (m.single_pulse()) {
        std::size_t used = 0;
        for (std::size_t c : chip_occupancy(m))
            used += c > 0;
        return static_cast<double>(used) / static_cast<double>(m.rows());
    }
    const EigenDecomposition ed = symmetric_eigen(reduced_gram(m));
    const double tau = detail::rank_threshold(ed.values, m.rows());
    const auto r = std::count_if(ed.values.begin(), ed.values.end(), [&](double v) { return v > tau; });
    return static_cast<double>(r) / static_cast<double>(m.rows());
}

inline SpectralSummary summarize(const SpreadingMatrix& m, unsigned max_moment = default_max_moment)
{
    require(max_moment >= 1, "summarize: max_moment must be >= 1");
    SpectralSummary s;
    s.users = m.cols();
    s.moments.resize(max_moment);
    if (m.single_pulse()) {
        const auto counts = chip_occupancy(m);
        for (unsigned l = 1; l <= max_moment; ++l)
            s.moments[l - 1] = detail::exact_count_moment(counts, l);
        std::size_t used = 0;
        s.eigenvalues.reserve(counts.size());
        for (std::size_t c : counts) {
            s.eigenvalues.push_back(static_cast<double>(c));
            used += c > 0;
        }
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
        s.normalized_rank = static_cast<double>(used) / static_cast<double>(m.rows());
        return s;
    }
    const EigenDecomposition ed = symmetric_eigen(reduced_gram(m));
    const double tau = detail::rank_threshold(ed.values, m.rows());
    std::size_t r = 0;
    s.eigenvalues = ed.values;
    for (double& v : s.eigenvalues) {
        r += v > tau;
        v = std::max(v, 0.0);
    }
    s.eigenvalues.resize(m.rows(), 0.0);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    s.normalized_rank = static_cast<double>(r) / static_cast<double>(m.rows());
    // m_1 is K/N for any unit-norm columns (trace identity); use it exactly.
    s.moments[0] = s.load();
    for (unsigned l = 2; l <= max_moment; ++l) {
        long double acc = 0;
        for (double v : s.eigenvalues)
            acc += std::pow(static_cast<long double>(v), static_cast<int>(l));
        s.moments[l - 1] = static_cast<double>(acc / m.rows());
    }
    return s;
}

/// (1/N) Σ log2(1 + γ λ_n) over a given spectrum.
inline double eigen_capacity(const std::vector<double>& eigenvalues, double gamma)
{
    require(!eigenvalues.empty(), "eigen_capacity: empty spectrum");
    long double acc = 0;
    for (double v : eigenvalues)
        acc += std::log1p(gamma * v);
    return static_cast<double>(acc / eigenvalues.size() / std::log(2.0L));
}

/// (1/N) log2 det(I + γ S Sᵀ) via Cholesky of the smaller of I + γ Sᵀ S and I + γ S Sᵀ.
inline double logdet_capacity(const SpreadingMatrix& m, double gamma)
{
    require(gamma > 0.0, "logdet_capacity: gamma must be positive");
    DenseMatrix a = reduced_gram(m);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            a(i, j) = gamma * a(i, j) + (i == j ? 1.0 : 0.0);
    const Cholesky chol(a);
    return chol.log_determinant() / (static_cast<double>(m.rows()) * std::log(2.0));
}

} // namespace thspeff
