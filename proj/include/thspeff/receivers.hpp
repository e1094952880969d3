// SPDX-License-Identifier: Apache-2.0
//
// Finite-N algebra of the linear front end  Wᵀ = Sᵀ (η S Sᵀ + α I)^{-1}:
// η = 0 is the single-user matched filter, η = 1 with α -> 0+ the
// decorrelator, η = 1 with α = 1/γ the MMSE filter.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ensembles.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "spectra.hpp"

namespace thspeff {

enum class Receiver { optimum, sumf, decorrelator, mmse, linear };
enum class SideInformation { known_signatures, unknown_signatures };

struct ReceiverSpec {
    Receiver receiver = Receiver::optimum;
    SideInformation side = SideInformation::known_signatures;
};

struct LinearFrontEnd {
    double alpha = 1.0; // regularizer
    double eta = 0.0;   // 0 or 1

    static constexpr double decorrelator_alpha = 1e-10;

    static LinearFrontEnd sumf() { return {1.0, 0.0}; }
    static LinearFrontEnd decorrelator() { return {decorrelator_alpha, 1.0}; }
    static LinearFrontEnd mmse(double gamma)
    {
        require(gamma > 0.0, "mmse front end: gamma must be positive");
        return {1.0 / gamma, 1.0};
    }

    void validate() const
    {
        require(eta == 0.0 || eta == 1.0, "LinearFrontEnd: eta must be 0 or 1");
        require(alpha >= 0.0 && std::isfinite(alpha), "LinearFrontEnd: alpha must be finite and >= 0");
        require(eta == 1.0 || alpha > 0.0, "LinearFrontEnd: eta = 0 requires alpha > 0");
    }
};

struct GainMatrix {
    DenseMatrix gains;              // G = Wᵀ S
    std::vector<double> noise_scale; // 1/(α + η v_i)^2, closed form only
    bool near_singular = false;     // set by the direct path when the regularized Gram is ill-conditioned
};

/// ρ = Sᵀ S.
inline DenseMatrix crosscorrelations(const SpreadingMatrix& m) { return user_gram(m); }

/// v_i: users sharing user i's chip, i included. Ns = 1 only.
inline std::vector<std::size_t> occupancy(const SpreadingMatrix& m)
{
    require(m.single_pulse(), "occupancy: defined for Ns = 1 only");
    const auto per_chip = chip_occupancy(m);
    std::vector<std::size_t> v(m.cols());
    for (std::size_t k = 0; k < m.cols(); ++k)
        v[k] = per_chip[m.pulse(k, 0).slot];
    return v;
}

/// G_ij = ρ_ij / (α + η v_i).
inline GainMatrix gain_closed_form(const SpreadingMatrix& m, const LinearFrontEnd& fe)
{
    fe.validate();
    const auto v = occupancy(m);
    const DenseMatrix rho = crosscorrelations(m);
    GainMatrix out{DenseMatrix(m.cols(), m.cols()), std::vector<double>(m.cols()), false};
    for (std::size_t i = 0; i < m.cols(); ++i) {
        const double d = fe.alpha + fe.eta * static_cast<double>(v[i]);
        require(d > 0.0, "gain_closed_form: alpha + eta v_i vanishes");
        out.noise_scale[i] = 1.0 / (d * d);
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.gains(i, j) = rho(i, j) / d;
    }
    return out;
}

/// [Σ]_ij / N0 = ρ_ij / (α + η v_i)^2.
inline DenseMatrix noise_covariance_closed_form(const SpreadingMatrix& m, const LinearFrontEnd& fe, double n0 = 1.0)
{
    const GainMatrix g = gain_closed_form(m, fe);
    const DenseMatrix rho = crosscorrelations(m);
    DenseMatrix out(m.cols(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i)
            out(i, j) = n0 * rho(i, j) * g.noise_scale[i];
    return out;
}

struct LinearSolution {
    DenseMatrix gains; // Wᵀ S
    DenseMatrix noise; // N0 Wᵀ W
    bool near_singular = false;
};

/// Dense path for any ensemble. Works with the smaller of the two regularized
/// Grams: A = η Sᵀ S + α I (push-through) when K <= N, M = η S Sᵀ + α I otherwise.
inline LinearSolution linear_front_end(const SpreadingMatrix& m, const LinearFrontEnd& fe, double n0 = 1.0)
{
    fe.validate();
    const bool users_side = m.cols() <= m.rows();
    DenseMatrix a = users_side ? user_gram(m) : chip_gram(m);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            a(i, j) = fe.eta * a(i, j) + (i == j ? fe.alpha : 0.0);

    auto factor = [&]() {
        try {
            return Cholesky(a);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what())
                                 + "; the Gram is singular, use the ridge decorrelator (alpha = 1e-10)");
        }
    };
    const Cholesky chol = factor();

    LinearSolution out;
    out.near_singular = chol.pivot_ratio() < 1e-8;
    if (users_side) {
        const DenseMatrix r = user_gram(m);
        out.gains = chol.solve(r);                    // A^{-1} R
        const DenseMatrix y = chol.solve(out.gains.transposed()); // A^{-1} R A^{-1}, transposed
        out.noise = y.transposed();
    } else {
        const DenseMatrix s = m.dense();
        const DenseMatrix w = chol.solve(s); // M^{-1} S
        const DenseMatrix st = s.transposed();
        out.gains = multiply(st, w);
        out.noise = multiply(w.transposed(), w);
    }
    for (std::size_t j = 0; j < out.noise.cols(); ++j)
        for (std::size_t i = 0; i < out.noise.rows(); ++i)
            out.noise(i, j) *= n0;
    return out;
}

inline GainMatrix gain_direct(const SpreadingMatrix& m, const LinearFrontEnd& fe)
{
    LinearSolution s = linear_front_end(m, fe);
    GainMatrix out{std::move(s.gains), {}, s.near_singular};
    out.noise_scale.resize(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i)
        out.noise_scale[i] = s.noise(i, i);
    return out;
}

inline DenseMatrix noise_covariance_direct(const SpreadingMatrix& m, const LinearFrontEnd& fe, double n0 = 1.0)
{
    return linear_front_end(m, fe, n0).noise;
}

/// Σ_{k != user} ρ_{user,k}^2: SUMF interference power.
inline double sumf_interference(const SpreadingMatrix& m, std::size_t user = 0)
{
    require(user < m.cols(), "sumf_interference: user index out of range");
    const double ns = static_cast<double>(m.pulses_per_symbol());
    long double acc = 0;
    for (std::size_t k = 0; k < m.cols(); ++k) {
        if (k == user)
            continue;
        const double c = static_cast<double>(m.signed_collisions(user, k));
        acc += c * c;
    }
    return static_cast<double>(acc / (ns * ns));
}

/// γ / (v1' γ + 1), v1' = number of users sharing user 1's chip besides user 1.
inline double sinr_from_occupancy(std::size_t v1_prime, double gamma)
{
    require(gamma >= 0.0, "sinr_from_occupancy: gamma must be >= 0");
    return gamma / (static_cast<double>(v1_prime) * gamma + 1.0);
}

/// Output SINR of user 1 (index 0) for an Ns = 1 matrix:
/// G11² γ / (Σ_{k>1} G1k² γ + [Σ]_11), which equals γ / (v1' γ + 1) for every (α, η).
/// Only row 1 of the closed-form gains is formed.
inline double conditional_sinr_user1(const SpreadingMatrix& m, const LinearFrontEnd& fe, double gamma)
{
    fe.validate();
    require(m.single_pulse(), "conditional_sinr_user1: defined for Ns = 1 only");
    require(gamma >= 0.0, "conditional_sinr_user1: gamma must be >= 0");
    std::size_t v1 = 1;
    for (std::size_t k = 1; k < m.cols(); ++k)
        v1 += m.signed_collisions(0, k) != 0;
    const double d = fe.alpha + fe.eta * static_cast<double>(v1);
    require(d > 0.0, "conditional_sinr_user1: alpha + eta v_1 vanishes");
    const double g11 = 1.0 / d;
    long double interference = 0;
    for (std::size_t k = 1; k < m.cols(); ++k) {
        const double g = static_cast<double>(m.signed_collisions(0, k)) / d;
        interference += g * g;
    }
    return static_cast<double>(g11 * g11 * gamma / (interference * gamma + 1.0 / (d * d)));
}

} // namespace thspeff
