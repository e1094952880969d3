// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Oracles here are written independently of the library where practical
// (Stirling recurrence, brute-force enumeration, Eigen dense solves).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thspeff/thspeff.hpp"

using namespace thspeff;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string num(double v, int prec = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// E[λ^L] of Poisson(β): Σ_l S(L,l) β^l with S from the recurrence.
double bell_moment(unsigned order, double beta)
{
    std::vector<std::vector<long double>> s(order + 1, std::vector<long double>(order + 1, 0.0L));
    s[0][0] = 1;
    for (unsigned n = 1; n <= order; ++n)
        for (unsigned k = 1; k <= n; ++k)
            s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
    long double acc = 0, p = 1;
    for (unsigned l = 1; l <= order; ++l) {
        p *= beta;
        acc += s[order][l] * p;
    }
    return static_cast<double>(acc);
}

Outcome criterion1()
{
    Outcome o;
    Experiment e;
    e.ensemble = EnsembleSpec::th(200, 1, 1);
    e.grid = {0.5};
    e.trials = 1000;
    e.statistics = {Statistic::esd_moments};
    e.max_moment = 4;
    const auto r = run(e);
    for (unsigned l = 2; l <= 4; ++l) {
        const auto& c = r.at("m" + std::to_string(l));
        const double want = bell_moment(l, 0.5);
        const double dev = std::abs(c.mean[0] - want) / c.std_error[0];
        o.check(dev <= 3.0, "m" + std::to_string(l) + " mean " + num(c.mean[0]) + " vs " + num(want) + " ("
                                + num(dev, 3) + " sigma)");
    }
    // m2 over all 16 TH(Ns=1) matrices with N = K = 2, from chip counts.
    double total = 0;
    for (int code = 0; code < 16; ++code) {
        int counts[2] = {0, 0};
        ++counts[code & 1];
        ++counts[(code >> 2) & 1];
        total += (counts[0] * counts[0] + counts[1] * counts[1]) / 2.0;
    }
    const double brute = total / 16.0;
    o.check(expected_moment_finite(2, 2, 2) == brute && brute == 1.5,
            "expected_moment_finite(2,2,2) = " + num(expected_moment_finite(2, 2, 2)) + ", brute force " + num(brute));
    return o;
}

Outcome criterion2()
{
    Outcome o;
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i)
        grid.push_back(0.2 * i);
    Experiment e;
    e.ensemble = EnsembleSpec::th(50, 1, 1);
    e.grid = grid;
    e.trials = 500;
    e.statistics = {Statistic::rank};
    const auto r1 = run(e).at("rank");
    double worst = 0;
    for (std::size_t i = 0; i < r1.size(); ++i)
        worst = std::max(worst, std::abs(r1.mean[i] - (1.0 - std::exp(-r1.x[i]))));
    o.check(worst <= 0.02, "Ns=1 max |mean r_N - (1 - e^-beta)| = " + num(worst));
    e.ensemble = EnsembleSpec::th(50, 1, 2);
    const auto r2 = run(e).at("rank");
    double margin = -1e300;
    for (std::size_t i = 0; i < r2.size(); ++i) {
        const double b = r2.x[i];
        margin = std::max(margin, r2.mean[i] - (std::min(b, 1.0 - std::exp(-2.0 * b)) + 2.0 * r2.std[i]));
    }
    o.check(margin <= 0.0, "Ns=2 max (mean - bound - 2 sigma) = " + num(margin));
    return o;
}

Outcome criterion3()
{
    Outcome o;
    Experiment e;
    e.ensemble = EnsembleSpec::th(50, 1, 1);
    e.axis = Axis::ebn0_db;
    e.beta = 0.5;
    e.grid = linear_grid({-1.5, 19.5, 1.5});
    e.grid.push_back(20.0);
    e.trials = 100;
    e.statistics = {Statistic::logdet};
    e.reference = Formula::c_opt_th_ns1;
    const auto r = run(e);
    const auto& emp = r.at("logdet");
    const auto& gam = r.at("gamma");
    double worst = 0, at = 0;
    for (std::size_t i = 0; i < emp.size(); ++i) {
        const double d = std::abs(emp.mean[i] - c_opt_th_ns1(0.5, gam.mean[i]));
        if (d > worst)
            worst = d, at = emp.x[i];
    }
    o.check(worst <= 0.05, "max |empirical - c_opt_th_ns1| = " + num(worst) + " at " + num(at) + " dB");
    return o;
}

double wideband_slope_target_opt(double b) { return 2.0 * b / (1.0 + b); }
double wideband_slope_target_sumf(double b) { return 2.0 * b / (1.0 + 2.0 * b); }

Outcome criterion4()
{
    Outcome o;
    const double ln2 = std::numbers::ln2;
    for (double b : {0.5, 1.0, 2.0}) {
        const std::string tag = " beta=" + num(b);
        const std::pair<std::string, Curve> eta_curves[] = {
            {"c_opt_th_ns1", bind(Formula::c_opt_th_ns1, b)},
            {"sumf_th_knownS(1)", bind(Formula::sumf_th_knownS, b, 1)},
            {"sumf_th_knownS(2)", bind(Formula::sumf_th_knownS, b, 2)},
            {"linear_th_ns1", bind(Formula::linear_th_ns1, b)}};
        for (const auto& [name, c] : eta_curves) {
            const double eta = numeric_eta_min(c, b);
            o.check(std::abs(eta - ln2) <= 1e-3, "eta_min " + name + tag + " = " + num(eta, 8));
        }
        const double s0 = numeric_s0(bind(Formula::c_opt_th_ns1, b));
        o.check(std::abs(s0 / wideband_slope_target_opt(b) - 1.0) <= 0.01,
                "S0 c_opt_th_ns1" + tag + " = " + num(s0) + " vs " + num(wideband_slope_target_opt(b)));
        const std::pair<std::string, Curve> sumf_curves[] = {
            {"sumf_ds", bind(Formula::sumf_ds, b)},
            {"sumf_th_knownS(1)", bind(Formula::sumf_th_knownS, b, 1)},
            {"sumf_th_knownS(2)", bind(Formula::sumf_th_knownS, b, 2)},
            {"sumf_th_star(1)", bind(Formula::sumf_th_star, b, 1)},
            {"sumf_th_star(2)", bind(Formula::sumf_th_star, b, 2)}};
        for (const auto& [name, c] : sumf_curves) {
            const double s = numeric_s0(c);
            o.check(std::abs(s / wideband_slope_target_sumf(b) - 1.0) <= 0.01,
                    "S0 " + name + tag + " = " + num(s) + " vs " + num(wideband_slope_target_sumf(b)));
        }
    }
    return o;
}

Outcome criterion5()
{
    Outcome o;
    for (double b : {0.5, 1.0, 2.0}) {
        const std::string tag = " beta=" + num(b);
        const auto opt = numeric_s_inf(bind(Formula::c_opt_th_ns1, b));
        const double want = 1.0 - std::exp(-b);
        o.check(std::abs(opt.slope / want - 1.0) <= 0.01, "S_inf c_opt_th_ns1" + tag + " = " + num(opt.slope) + " vs " + num(want));
        for (std::size_t ns : {1u, 2u}) {
            const auto s = numeric_s_inf(bind(Formula::sumf_th_knownS, b, ns));
            const double w = b * std::exp(-static_cast<double>(ns * ns) * b);
            o.check(std::abs(s.slope / w - 1.0) <= 0.02,
                    "S_inf sumf_th_knownS(" + std::to_string(ns) + ")" + tag + " = " + num(s.slope) + " vs " + num(w));
        }
        const auto st = numeric_s_inf(bind(Formula::sumf_th_star, b, 1));
        const double w = b * std::exp(-b);
        o.check(std::abs(st.slope / w - 1.0) <= 0.02, "S_inf sumf_th_star(1)" + tag + " = " + num(st.slope) + " vs " + num(w));
    }
    const double m = mmse_ds(2.0, 1e6);
    o.check(std::abs(m - 2.0) <= 1e-3, "mmse_ds(2, 1e6) = " + num(m, 10));
    return o;
}

Outcome criterion6()
{
    Outcome o;
    double gain = 0, noise = 0;
    for (unsigned inst = 0; inst < 100; ++inst) {
        Engine eng = make_engine(derive_seed(2024, inst));
        const std::size_t n = 1 + uniform_below(eng, 16);
        const std::size_t k = 1 + uniform_below(eng, 2 * n);
        const SpreadingMatrix m = sample(EnsembleSpec::th(n, k, 1, eng()));
        const DenseMatrix d = m.dense();
        Eigen::MatrixXd s(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j)
                s(i, j) = d(i, j);
        for (double alpha : {1e-6, 0.1, 1.0})
            for (double eta : {0.0, 1.0}) {
                // W = (η S Sᵀ + α I)^{-1} S, G = Wᵀ S, noise = Wᵀ W.
                const Eigen::MatrixXd a = eta * s * s.transpose() + alpha * Eigen::MatrixXd::Identity(n, n);
                const Eigen::MatrixXd w = a.ldlt().solve(s);
                const Eigen::MatrixXd g = w.transpose() * s, cov = w.transpose() * w;
                const LinearFrontEnd fe{alpha, eta};
                const DenseMatrix gc = gain_closed_form(m, fe).gains;
                const DenseMatrix nc = noise_covariance_closed_form(m, fe);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) {
                        gain = std::max(gain, std::abs(gc(i, j) - g(i, j)));
                        noise = std::max(noise, std::abs(nc(i, j) - cov(i, j)));
                    }
            }
    }
    o.check(gain < 1e-10, "gain closed form vs dense solve max |delta| = " + num(gain, 3));
    o.check(noise < 1e-10, "noise covariance closed form vs W^T W max |delta| = " + num(noise, 3));
    return o;
}

Outcome criterion7()
{
    Outcome o;
    double worst = 0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double b = 0.1 * (i + 1);
            const double g = std::pow(10.0, -2.0 + 6.0 * j / 19.0);
            worst = std::max(worst, std::abs(linear_th_ns1(b, g) - sumf_th_knownS(b, g, 1)));
        }
    o.check(worst <= 1e-12, "20x20 grid max |linear_th_ns1 - sumf_th_knownS(.,.,1)| = " + num(worst, 3));

    Experiment e;
    e.ensemble = EnsembleSpec::th(200, 1, 1);
    e.grid = {1.0};
    e.trials = 100000;
    e.gamma = 10.0;
    e.statistics = {Statistic::linear_mi};
    const auto r = run(e).at("linear_mi");
    // Series Σ f_k(1) log2(1 + 10/(1 + 10k)) by pmf recurrence.
    long double p = std::exp(-1.0L), series = 0;
    for (int k = 0; k < 60; ++k) {
        series += p * std::log2(1.0L + 10.0L / (1.0L + 10.0L * k));
        p /= (k + 1);
    }
    const double dev = std::abs(r.mean[0] - static_cast<double>(series)) / r.std_error[0];
    o.check(dev <= 3.0, "Monte Carlo conditional MI " + num(r.mean[0]) + " vs series " + num(static_cast<double>(series))
                            + " (" + num(dev, 3) + " sigma)");
    return o;
}

Outcome criterion8()
{
    Outcome o;
    Experiment e;
    e.ensemble = EnsembleSpec::th(128, 1, 1);
    e.fill_fraction = 0.5;
    e.grid = {1.0};
    e.trials = 1000;
    for (double g : {1.0, 10.0, 100.0}) {
        const auto r = empirical_sumf_mi(e, g);
        const double want = 1.0 * std::log2(1.0 + g / (1.0 + g));
        const double rel = std::abs(r.mean[0] / want - 1.0);
        o.check(rel <= 0.02, "Ns=N/2 gamma=" + num(g) + ": " + num(r.mean[0]) + " vs sumf_ds " + num(want) + " (rel "
                                 + num(rel, 3) + ")");
    }
    return o;
}

double kurtosis_oracle(double b, double g, double ns) { return 2.0 + 2.0 / (ns * ns) * b * g * g / ((1 + b * g) * (1 + b * g)); }

Outcome criterion9()
{
    Outcome o;
    for (double v : {1.0, 0.01, 250.0}) {
        const double h = mixture_entropy({{1.0}, {v}});
        const double want = std::log2(std::numbers::pi * std::numbers::e * v);
        o.check(std::abs(h - want) <= 1e-8, "single Gaussian var=" + num(v) + " |delta| = " + num(std::abs(h - want), 3));
    }
    Engine eng = make_engine(77);
    int inside = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t k = 1 + uniform_below(eng, 8);
        GaussianMixture m;
        double s = 0;
        for (std::size_t j = 0; j < k; ++j) {
            m.weights.push_back(1.0 + static_cast<double>(uniform_below(eng, 1000)));
            s += m.weights.back();
            m.variances.push_back(std::pow(10.0, -2.0 + 6.0 * static_cast<double>(uniform_below(eng, 1u << 20)) / (1u << 20)));
        }
        for (double& w : m.weights)
            w /= s;
        const double h = mixture_entropy(m);
        long double hg = 0, hp = 0;
        for (std::size_t j = 0; j < k; ++j) {
            hg += m.weights[j] * std::log2(std::numbers::pi * std::numbers::e * m.variances[j]);
            hp -= m.weights[j] * std::log2(m.weights[j]);
        }
        inside += h >= hg - 1e-9 && h <= hg + hp + 1e-9;
    }
    o.check(inside == 50, "sandwich bounds hold on " + std::to_string(inside) + "/50 random mixtures");
    double worst = 0;
    for (double b : {0.5, 1.0, 2.0})
        for (double g : {1.0, 10.0, 100.0})
            for (std::size_t ns : {1u, 2u}) {
                const auto pz = mixture_pz(b, g, ns);
                const double m2 = mixture_moment_quadrature(pz, 1), m4 = mixture_moment_quadrature(pz, 2);
                worst = std::max(worst, std::abs(m4 / (m2 * m2) - kurtosis_oracle(b, g, static_cast<double>(ns))));
            }
    o.check(worst <= 1e-6, "quadrature kurtosis vs closed form, max |delta| = " + num(worst, 3));

    Experiment e;
    e.ensemble = EnsembleSpec::th(200, 1, 1);
    e.grid = {1.0};
    e.trials = 1;
    e.statistics = {Statistic::sumf_mi};
    const double g = std::pow(10.0, 1.3);
    const auto h = interference_histogram(e, g, 200, 1000000);
    const double want = kurtosis_oracle(1.0, g, 1.0);
    o.check(std::abs(h.kurtosis() / want - 1.0) <= 0.05,
            "empirical kurtosis (1e6 samples) " + num(h.kurtosis()) + " vs " + num(want));
    return o;
}

Outcome criterion10()
{
    Outcome o;
    const auto r2 = variance_decay_check(2, {1.0}, {100}, 2000);
    o.check(r2[0].ratio >= 2.5 && r2[0].ratio <= 6.0,
            "Var(m2) N=100/N=400 at beta=1: " + num(r2[0].var_n, 4) + "/" + num(r2[0].var_4n, 4) + " = " + num(r2[0].ratio, 4));
    const auto r3 = variance_decay_check(3, {0.5}, {100}, 2000);
    o.check(r3[0].ratio >= 2.5 && r3[0].ratio <= 6.0, "Var(m3) ratio at beta=0.5: " + num(r3[0].ratio, 4));
    const auto r1 = variance_decay_check(1, {0.5, 1.0}, {100}, 2000);
    o.check(r1[0].var_n == 0.0 && r1[0].var_4n == 0.0 && r1[1].var_n == 0.0 && r1[1].var_4n == 0.0,
            "Var(m1) is exactly 0");
    return o;
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"moment convergence", criterion1},       {"rank law", criterion2},
        {"optimum decoding vs simulation", criterion3}, {"wideband parameters", criterion4},
        {"high-SNR slopes", criterion5},          {"receiver algebra oracle", criterion6},
        {"linear/SUMF equivalence", criterion7},  {"dense-limit universality", criterion8},
        {"mixture entropy engine", criterion9},   {"variance decay", criterion10}};
    int failed = 0;
    int id = 0;
    for (const auto& [name, fn] : criteria) {
        ++id;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, secs);
        for (const auto& n : o.notes)
            std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%d criteria passed\n", id - failed, id);
    return failed == 0 ? 0 : 1;
}
