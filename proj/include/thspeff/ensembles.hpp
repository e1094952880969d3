// SPDX-License-Identifier: Apache-2.0
//
// Random spreading matrices for the time-hopping (TH) and binary
// direct-sequence (DS) ensembles.
//
// An (Ns, Nh)-sequence splits the N = Ns * Nh chips into Ns blocks of Nh
// consecutive chips and places exactly one pulse of amplitude ±1/sqrt(Ns) in
// each block, slot and sign uniform and independent. Binary DS is the Ns = N
// case. Matrices are stored in that compact (slot, sign) form; a dense view is
// materialized on demand.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace thspeff {

enum class EnsembleKind { th, ds_binary };

inline std::string to_string(EnsembleKind k) { return k == EnsembleKind::th ? "TH" : "DS-binary"; }

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::th;
    std::size_t chips = 1;  // N
    std::size_t users = 1;  // K
    std::size_t pulses = 1; // Ns; forced to N for DS-binary
    std::uint64_t seed = 0;

    static EnsembleSpec th(std::size_t n, std::size_t k, std::size_t ns, std::uint64_t seed = 0)
    {
        return {EnsembleKind::th, n, k, ns, seed};
    }
    static EnsembleSpec ds(std::size_t n, std::size_t k, std::uint64_t seed = 0)
    {
        return {EnsembleKind::ds_binary, n, k, n, seed};
    }

    std::size_t pulses_per_symbol() const noexcept { return kind == EnsembleKind::ds_binary ? chips : pulses; }
    std::size_t hops() const noexcept { return chips / pulses_per_symbol(); }
    double load() const noexcept { return static_cast<double>(users) / static_cast<double>(chips); }

    void validate() const
    {
        require(chips > 0, "ensemble: N must be positive");
        require(users > 0, "ensemble: K must be positive");
        const std::size_t ns = pulses_per_symbol();
        require(ns > 0, "ensemble: Ns must be positive");
        require(chips % ns == 0, "ensemble: Ns must divide N (Ns=" + std::to_string(ns)
                                     + ", N=" + std::to_string(chips) + ")");
    }
};

/// One pulse of a column: its slot inside the block and its sign.
struct Pulse {
    std::uint32_t slot = 0;
    std::int8_t sign = 1;
    friend bool operator==(const Pulse&, const Pulse&) = default;
};

struct PulsePosition {
    std::size_t block = 0;
    std::size_t slot = 0;
    int sign = 1;
    friend bool operator==(const PulsePosition&, const PulsePosition&) = default;
};

class SpreadingMatrix {
public:
    SpreadingMatrix(EnsembleSpec spec, std::vector<Pulse> pulses) : spec_(spec), pulses_(std::move(pulses))
    {
        spec_.validate();
        if (spec_.kind == EnsembleKind::ds_binary)
            spec_.pulses = spec_.chips;
        require(pulses_.size() == spec_.users * spec_.pulses,
                "SpreadingMatrix: expected K*Ns pulses, got " + std::to_string(pulses_.size()));
        for (const Pulse& p : pulses_) {
            require(p.slot < hops(), "SpreadingMatrix: slot outside its block");
            require(p.sign == 1 || p.sign == -1, "SpreadingMatrix: sign must be +-1");
        }
    }

    const EnsembleSpec& spec() const noexcept { return spec_; }
    std::size_t rows() const noexcept { return spec_.chips; }
    std::size_t cols() const noexcept { return spec_.users; }
    std::size_t pulses_per_symbol() const noexcept { return spec_.pulses; }
    std::size_t hops() const noexcept { return spec_.chips / spec_.pulses; }
    double load() const noexcept { return spec_.load(); }
    double amplitude() const noexcept { return 1.0 / std::sqrt(static_cast<double>(spec_.pulses)); }

    /// Ns = 1: S Sᵀ is diagonal and most quantities reduce to chip counts.
    bool single_pulse() const noexcept { return spec_.pulses == 1; }

    const Pulse& pulse(std::size_t user, std::size_t block) const { return pulses_[user * spec_.pulses + block]; }
    std::size_t row_of(std::size_t user, std::size_t block) const { return block * hops() + pulse(user, block).slot; }
    const std::vector<Pulse>& pulses() const noexcept { return pulses_; }

    double operator()(std::size_t row, std::size_t user) const
    {
        const std::size_t block = row / hops();
        const Pulse& p = pulse(user, block);
        return (row % hops() == p.slot) ? p.sign * amplitude() : 0.0;
    }

    DenseMatrix dense() const
    {
        DenseMatrix m(rows(), cols());
        const double a = amplitude();
        for (std::size_t k = 0; k < cols(); ++k)
            for (std::size_t b = 0; b < spec_.pulses; ++b)
                m(row_of(k, b), k) = pulse(k, b).sign * a;
        return m;
    }

    /// Integer inner product  Ns * <s_i, s_j>  (collisions weighted by sign).
    long signed_collisions(std::size_t i, std::size_t j) const
    {
        long c = 0;
        for (std::size_t b = 0; b < spec_.pulses; ++b) {
            const Pulse& p = pulse(i, b);
            const Pulse& q = pulse(j, b);
            if (p.slot == q.slot)
                c += p.sign * q.sign;
        }
        return c;
    }

    friend bool operator==(const SpreadingMatrix& a, const SpreadingMatrix& b)
    {
        return a.spec_.chips == b.spec_.chips && a.spec_.users == b.spec_.users
            && a.spec_.pulses == b.spec_.pulses && a.pulses_ == b.pulses_;
    }

private:
    EnsembleSpec spec_;
    std::vector<Pulse> pulses_;
};

/// Draws a matrix from the ensemble; the spec (seed included) fully determines it.
inline SpreadingMatrix sample(const EnsembleSpec& spec)
{
    spec.validate();
    const std::size_t ns = spec.pulses_per_symbol();
    const std::size_t nh = spec.chips / ns;
    Engine eng = make_engine(derive_seed(spec.seed, spec.chips, spec.users));
    std::vector<Pulse> pulses(spec.users * ns);
    for (Pulse& p : pulses) {
        p.slot = nh == 1 ? 0 : static_cast<std::uint32_t>(uniform_below(eng, nh));
        p.sign = static_cast<std::int8_t>(random_sign(eng));
    }
    return SpreadingMatrix(spec, std::move(pulses));
}

inline std::vector<std::vector<PulsePosition>> nonzero_positions(const SpreadingMatrix& m)
{
    std::vector<std::vector<PulsePosition>> out(m.cols());
    for (std::size_t k = 0; k < m.cols(); ++k) {
        out[k].reserve(m.pulses_per_symbol());
        for (std::size_t b = 0; b < m.pulses_per_symbol(); ++b)
            out[k].push_back({b, m.pulse(k, b).slot, m.pulse(k, b).sign});
    }
    return out;
}

/// Rebuilds a TH matrix with N chips from per-column pulse positions.
inline SpreadingMatrix from_positions(std::size_t chips, const std::vector<std::vector<PulsePosition>>& columns)
{
    require(!columns.empty(), "from_positions: no columns");
    const std::size_t ns = columns.front().size();
    require(ns > 0 && chips % ns == 0, "from_positions: Ns must divide N");
    std::vector<Pulse> pulses(columns.size() * ns);
    for (std::size_t k = 0; k < columns.size(); ++k) {
        require(columns[k].size() == ns, "from_positions: every column needs Ns pulses");
        for (const PulsePosition& p : columns[k]) {
            require(p.block < ns, "from_positions: block index out of range");
            pulses[k * ns + p.block] = {static_cast<std::uint32_t>(p.slot), static_cast<std::int8_t>(p.sign)};
        }
    }
    return SpreadingMatrix(EnsembleSpec::th(chips, columns.size(), ns), std::move(pulses));
}

/// Parses explicit columns into a TH matrix with Ns pulses per column. Each
/// block of N/Ns rows must hold exactly one entry of magnitude 1/sqrt(Ns).
inline SpreadingMatrix from_dense(const DenseMatrix& m, std::size_t ns)
{
    const std::size_t n = m.rows();
    require(ns > 0 && n % ns == 0, "from_dense: Ns must divide N");
    const std::size_t nh = n / ns;
    const double amp = 1.0 / std::sqrt(static_cast<double>(ns));
    std::vector<Pulse> pulses(m.cols() * ns);
    for (std::size_t k = 0; k < m.cols(); ++k)
        for (std::size_t b = 0; b < ns; ++b) {
            int found = 0;
            for (std::size_t s = 0; s < nh; ++s) {
                const double v = m(b * nh + s, k);
                if (v == 0.0)
                    continue;
                require(std::abs(std::abs(v) - amp) <= 1e-12, "from_dense: nonzero entry is not +-1/sqrt(Ns)");
                pulses[k * ns + b] = {static_cast<std::uint32_t>(s), static_cast<std::int8_t>(v > 0 ? 1 : -1)};
                ++found;
            }
            require(found == 1, "from_dense: each block must be 1-sparse");
        }
    const EnsembleKind kind = ns == n ? EnsembleKind::ds_binary : EnsembleKind::th;
    return SpreadingMatrix(EnsembleSpec{kind, n, m.cols(), ns, 0}, std::move(pulses));
}

} // namespace thspeff
