// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo harness. Every (grid point, trial) pair gets its own seed,
// derive_seed(seed, point, trial), and writes into its own slot; reduction runs
// in index order, so results do not depend on the worker count.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "ensembles.hpp"
#include "error.hpp"
#include "laws.hpp"
#include "parallel.hpp"
#include "receivers.hpp"
#include "rng.hpp"
#include "spectra.hpp"
#include "sweep.hpp"

namespace thspeff {

enum class Axis { beta, gamma, ebn0_db, n };
enum class Statistic { esd_moments, rank, logdet, sumf_mi, linear_mi, interference_hist };

inline std::string to_string(Axis a)
{
    switch (a) {
    case Axis::beta: return "beta";
    case Axis::gamma: return "gamma";
    case Axis::ebn0_db: return "ebn0_db";
    case Axis::n: return "N";
    }
    return "?";
}

struct Experiment {
    EnsembleSpec ensemble;             // N, Ns and kind; K is derived from beta
    Axis axis = Axis::beta;
    std::vector<double> grid;
    std::size_t trials = 100;
    std::set<Statistic> statistics;
    std::uint64_t seed = 1;
    double beta = 1.0;                 // load when the axis is not beta
    double gamma = 10.0;               // SNR when the axis is beta or N
    unsigned max_moment = default_max_moment;
    std::optional<double> fill_fraction; // Ns = fill_fraction * N when set (TH only)
    Formula reference = Formula::c_opt_th_ns1; // maps E_b/N0 to γ on the ebn0_db axis
    LinearFrontEnd front_end = LinearFrontEnd::sumf(); // for linear_mi

    void validate() const
    {
        require(trials >= 1, "experiment: trials must be >= 1");
        require(!grid.empty(), "experiment: empty grid");
        for (std::size_t i = 1; i < grid.size(); ++i)
            require(grid[i] > grid[i - 1], "experiment: grid must be strictly increasing");
        require(!statistics.empty(), "experiment: no statistics requested");
        require(!statistics.contains(Statistic::interference_hist),
                "experiment: use interference_histogram for the histogram statistic");
        if (fill_fraction)
            require(*fill_fraction > 0.0 && *fill_fraction <= 1.0, "experiment: fill fraction must lie in (0, 1]");
    }
};

/// Concrete N, K, Ns and γ of one grid point.
struct GridPoint {
    EnsembleSpec spec;
    double gamma = 0.0;
    double reference_capacity = 0.0; // ebn0_db axis only
};

namespace detail {

inline std::size_t round_positive(double x, const char* what)
{
    const double r = std::round(x);
    require(r >= 1.0, std::string("experiment: ") + what + " rounds to zero");
    return static_cast<std::size_t>(r);
}

struct Moments {
    double mean = 0.0, std = 0.0;
};

/// Shifted two-pass: a constant sample gives std exactly 0.
inline Moments sample_moments(const double* x, std::size_t n, std::size_t stride)
{
    const double shift = x[0];
    long double s = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = static_cast<long double>(x[i * stride]) - shift;
        s += d;
        s2 += d * d;
    }
    Moments m;
    m.mean = static_cast<double>(shift + s / n);
    if (n > 1) {
        const long double var = (s2 - s * s / n) / (n - 1);
        m.std = var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
    }
    return m;
}

} // namespace detail

inline GridPoint resolve_point(const Experiment& e, double x)
{
    GridPoint p;
    p.spec = e.ensemble;
    std::size_t n = e.ensemble.chips;
    double beta = e.beta;
    p.gamma = e.gamma;
    switch (e.axis) {
    case Axis::beta: beta = x; break;
    case Axis::gamma: p.gamma = x; break;
    case Axis::n: n = detail::round_positive(x, "N"); break;
    case Axis::ebn0_db: {
        const std::size_t ns_ref = e.ensemble.kind == EnsembleKind::th ? e.ensemble.pulses : 1;
        const EbN0Point op = at_ebn0(bind(e.reference, beta, ns_ref), beta, x);
        require(op.gamma > 0.0, "experiment: E_b/N0 grid point at or below the reference eta_min");
        p.gamma = op.gamma;
        p.reference_capacity = op.capacity;
        break;
    }
    }
    p.spec.chips = n;
    p.spec.users = detail::round_positive(beta * static_cast<double>(n), "K");
    if (p.spec.kind == EnsembleKind::ds_binary)
        p.spec.pulses = n;
    else if (e.fill_fraction)
        p.spec.pulses = detail::round_positive(*e.fill_fraction * static_cast<double>(n), "Ns");
    p.spec.validate();
    return p;
}

struct ExperimentResult {
    std::vector<SweepResult> curves;

    const SweepResult& at(const std::string& name) const
    {
        for (const auto& c : curves)
            if (c.name == name)
                return c;
        throw DomainError("experiment result has no curve '" + name + "'");
    }
};

/// Empirical SUMF mutual information of user 1, β log2(1 + γ/(1 + ςγ)), ς = Σ_{k>1} ρ1k².
inline double sumf_mi_sample(const SpreadingMatrix& m, double gamma)
{
    const double s = sumf_interference(m, 0);
    return m.load() * std::log2(1.0 + gamma / (1.0 + s * gamma));
}

inline ExperimentResult run(const Experiment& e)
{
    e.validate();
    const std::size_t points = e.grid.size();
    std::vector<GridPoint> resolved(points);
    for (std::size_t p = 0; p < points; ++p)
        resolved[p] = resolve_point(e, e.grid[p]);

    // Column layout of one trial's record.
    std::vector<std::string> names;
    std::vector<std::string> y_labels;
    const bool want_moments = e.statistics.contains(Statistic::esd_moments);
    const bool want_rank = e.statistics.contains(Statistic::rank);
    const bool want_logdet = e.statistics.contains(Statistic::logdet);
    const bool want_sumf = e.statistics.contains(Statistic::sumf_mi);
    const bool want_linear = e.statistics.contains(Statistic::linear_mi);
    if (want_moments)
        for (unsigned l = 1; l <= e.max_moment; ++l) {
            names.push_back("m" + std::to_string(l));
            y_labels.push_back("moment");
        }
    if (want_rank) {
        names.push_back("rank");
        y_labels.push_back("normalized_rank");
    }
    if (want_logdet) {
        names.push_back("logdet");
        y_labels.push_back("C");
    }
    if (want_sumf) {
        names.push_back("sumf_mi");
        y_labels.push_back("I");
    }
    if (want_linear) {
        names.push_back("linear_mi");
        y_labels.push_back("I");
    }
    const std::size_t width = names.size();
    const std::size_t tasks = points * e.trials;
    std::vector<double> records(tasks * width);

    parallel_for(tasks, [&](std::size_t task) {
        const std::size_t p = task / e.trials, t = task % e.trials;
        const GridPoint& gp = resolved[p];
        try {
            EnsembleSpec spec = gp.spec;
            spec.seed = derive_seed(e.seed, p, t);
            const SpreadingMatrix m = sample(spec);
            double* out = &records[task * width];
            if (want_moments || want_rank) {
                const SpectralSummary s = summarize(m, want_moments ? e.max_moment : 1);
                if (want_moments)
                    for (unsigned l = 0; l < e.max_moment; ++l)
                        *out++ = s.moments[l];
                if (want_rank)
                    *out++ = s.normalized_rank;
            }
            if (want_logdet)
                *out++ = logdet_capacity(m, gp.gamma);
            if (want_sumf)
                *out++ = sumf_mi_sample(m, gp.gamma);
            if (want_linear)
                *out++ = m.load() * std::log2(1.0 + conditional_sinr_user1(m, e.front_end, gp.gamma));
        } catch (const NumericalError& err) {
            std::ostringstream msg;
            msg << err.what() << " [grid point " << p << ", trial " << t << "]";
            throw NumericalError(msg.str());
        } catch (const DomainError& err) {
            std::ostringstream msg;
            msg << err.what() << " [grid point " << p << ", trial " << t << "]";
            throw DomainError(msg.str());
        }
    });

    ExperimentResult result;
    for (std::size_t c = 0; c < width; ++c) {
        SweepResult r;
        r.name = names[c];
        r.tag = CurveTag::empirical;
        r.x_label = to_string(e.axis);
        r.y_label = y_labels[c];
        for (std::size_t p = 0; p < points; ++p) {
            const auto mom = detail::sample_moments(&records[p * e.trials * width + c], e.trials, width);
            r.x.push_back(e.axis == Axis::beta ? resolved[p].spec.load() : e.grid[p]);
            r.mean.push_back(mom.mean);
            r.std.push_back(mom.std);
            r.std_error.push_back(mom.std / std::sqrt(static_cast<double>(e.trials)));
            r.trials.push_back(e.trials);
        }
        r.metadata["ensemble"] = to_string(e.ensemble.kind);
        r.metadata["N"] = std::to_string(resolved.front().spec.chips);
        r.metadata["Ns"] = std::to_string(resolved.front().spec.pulses_per_symbol());
        r.metadata["seed"] = std::to_string(e.seed);
        r.metadata["trials"] = std::to_string(e.trials);
        result.curves.push_back(std::move(r));
    }
    if (e.axis == Axis::ebn0_db) {
        SweepResult ref;
        ref.name = "reference";
        ref.x_label = "ebn0_db";
        ref.y_label = "C";
        ref.metadata["formula"] = std::string(info(e.reference).name);
        for (std::size_t p = 0; p < points; ++p) {
            ref.x.push_back(e.grid[p]);
            ref.mean.push_back(resolved[p].reference_capacity);
        }
        SweepResult gammas = ref;
        gammas.name = "gamma";
        gammas.y_label = "gamma";
        for (std::size_t p = 0; p < points; ++p)
            gammas.mean[p] = resolved[p].gamma;
        result.curves.push_back(std::move(ref));
        result.curves.push_back(std::move(gammas));
    }
    return result;
}

/// Runs the experiment with only the SUMF statistic at the given γ.
inline SweepResult empirical_sumf_mi(Experiment e, double gamma)
{
    require(gamma >= 0.0, "empirical_sumf_mi: gamma must be >= 0");
    e.statistics = {Statistic::sumf_mi};
    e.gamma = gamma;
    return run(e).at("sumf_mi");
}

struct InterferenceHistogram {
    std::vector<double> centers;
    std::vector<double> density; // of Re Z
    double bin_width = 0.0;
    std::size_t samples = 0;
    std::size_t outside = 0;      // samples beyond the histogram range
    double second_moment = 0.0;   // E|Z|^2
    double fourth_moment = 0.0;   // E|Z|^4
    double kurtosis() const { return fourth_moment / (second_moment * second_moment); }
};

inline constexpr std::size_t histogram_chunk = 10000;

/// Samples Z1 = Σ_{k>1} ρ1k b_k + n1 with fresh pulses per sample, b_k ~ CN(0, γ), n1 ~ CN(0, 1).
/// N and Ns come from the ensemble, K = round(β N); the histogram covers Re Z on ±range.
inline InterferenceHistogram interference_histogram(const Experiment& e, double gamma, std::size_t bins,
                                                    std::size_t samples = 1000000, double range = 0.0)
{
    require(bins >= 1, "interference_histogram: bins must be >= 1");
    require(samples >= 1, "interference_histogram: samples must be >= 1");
    require(gamma >= 0.0, "interference_histogram: gamma must be >= 0");
    const GridPoint gp = resolve_point(e, e.axis == Axis::beta ? e.beta : e.grid.front());
    const std::size_t ns = gp.spec.pulses_per_symbol();
    const std::size_t nh = gp.spec.hops();
    const std::size_t k = gp.spec.users;
    if (range <= 0.0)
        range = 5.0 * std::sqrt(0.5 * (1.0 + gp.spec.load() * gamma));
    const double width = 2.0 * range / static_cast<double>(bins);
    const double sd = std::sqrt(0.5); // per real dimension of CN(0, 1)
    const double sg = std::sqrt(0.5 * gamma);

    const std::size_t chunks = (samples + histogram_chunk - 1) / histogram_chunk;
    struct Partial {
        std::vector<std::size_t> counts;
        std::size_t outside = 0;
        long double s2 = 0, s4 = 0;
    };
    std::vector<Partial> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        Partial& part = parts[c];
        part.counts.assign(bins, 0);
        Engine eng = make_engine(derive_seed(e.seed, 0xF16, c));
        const std::size_t begin = c * histogram_chunk;
        const std::size_t end = std::min(samples, begin + histogram_chunk);
        std::vector<std::uint32_t> own(ns);
        for (std::size_t s = begin; s < end; ++s) {
            for (auto& slot : own)
                slot = nh == 1 ? 0 : static_cast<std::uint32_t>(uniform_below(eng, nh));
            double re = sd * standard_normal(eng);
            double im = sd * standard_normal(eng);
            for (std::size_t u = 1; u < k; ++u) {
                long c_sum = 0;
                for (std::size_t b = 0; b < ns; ++b) {
                    const auto slot = nh == 1 ? 0u : static_cast<std::uint32_t>(uniform_below(eng, nh));
                    if (slot == own[b])
                        c_sum += random_sign(eng);
                }
                if (c_sum == 0)
                    continue;
                const double rho = static_cast<double>(c_sum) / static_cast<double>(ns);
                re += rho * sg * standard_normal(eng);
                im += rho * sg * standard_normal(eng);
            }
            const double a2 = re * re + im * im;
            part.s2 += a2;
            part.s4 += static_cast<long double>(a2) * a2;
            const double pos = (re + range) / width;
            if (pos >= 0.0 && pos < static_cast<double>(bins))
                ++part.counts[static_cast<std::size_t>(pos)];
            else
                ++part.outside;
        }
    });

    InterferenceHistogram h;
    h.bin_width = width;
    h.samples = samples;
    std::vector<std::size_t> counts(bins, 0);
    long double s2 = 0, s4 = 0;
    for (const auto& part : parts) {
        for (std::size_t b = 0; b < bins; ++b)
            counts[b] += part.counts[b];
        h.outside += part.outside;
        s2 += part.s2;
        s4 += part.s4;
    }
    h.second_moment = static_cast<double>(s2 / samples);
    h.fourth_moment = static_cast<double>(s4 / samples);
    for (std::size_t b = 0; b < bins; ++b) {
        h.centers.push_back(-range + (static_cast<double>(b) + 0.5) * width);
        h.density.push_back(static_cast<double>(counts[b]) / (static_cast<double>(samples) * width));
    }
    return h;
}

struct VarianceDecayRow {
    double beta = 0.0;
    std::size_t n = 0;
    double var_n = 0.0;
    double var_4n = 0.0;
    double ratio = 0.0; // var_n / var_4n, 4 when both vanish
    bool pass = false;
};

inline constexpr double variance_ratio_lo = 2.5;
inline constexpr double variance_ratio_hi = 6.0;

/// Sample Var(m_L) for TH Ns = 1 at N and 4N, for every β and N given.
inline std::vector<VarianceDecayRow> variance_decay_check(unsigned order, const std::vector<double>& betas,
                                                          const std::vector<std::size_t>& ns_values,
                                                          std::size_t trials = 2000, std::uint64_t seed = 1)
{
    require(order >= 1, "variance_decay_check: L must be >= 1");
    require(trials >= 2, "variance_decay_check: need at least two trials");
    std::vector<VarianceDecayRow> rows;
    std::uint64_t stream = 0;
    for (double beta : betas)
        for (std::size_t n : ns_values) {
            Experiment e;
            e.ensemble = EnsembleSpec::th(n, 1, 1);
            e.axis = Axis::n;
            e.grid = {static_cast<double>(n), static_cast<double>(4 * n)};
            e.trials = trials;
            e.statistics = {Statistic::esd_moments};
            e.max_moment = order;
            e.beta = beta;
            e.seed = derive_seed(seed, 0x7a2, stream++);
            const SweepResult r = run(e).at("m" + std::to_string(order));
            VarianceDecayRow row;
            row.beta = beta;
            row.n = n;
            row.var_n = r.std[0] * r.std[0];
            row.var_4n = r.std[1] * r.std[1];
            if (row.var_n == 0.0 && row.var_4n == 0.0) {
                row.ratio = 4.0;
                row.pass = true;
            } else {
                row.ratio = row.var_4n > 0.0 ? row.var_n / row.var_4n : std::numeric_limits<double>::infinity();
                row.pass = row.ratio >= variance_ratio_lo && row.ratio <= variance_ratio_hi;
            }
            rows.push_back(row);
        }
    return rows;
}

} // namespace thspeff
