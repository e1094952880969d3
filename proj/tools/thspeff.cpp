// SPDX-License-Identifier: Apache-2.0
//
// thspeff: figure data, single formulas, ensemble draws and validation suites.
// Exit codes: 0 ok, 1 validation failure, 2 usage or domain error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "thspeff/thspeff.hpp"

namespace {

using namespace thspeff;

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

Grid parse_grid(const std::string& s)
{
    const auto a = s.find(':');
    const auto b = a == std::string::npos ? a : s.find(':', a + 1);
    if (b == std::string::npos)
        throw DomainError("--grid expects lo:hi:step, got '" + s + "'");
    try {
        std::size_t used = 0;
        Grid g;
        const std::string parts[3] = {s.substr(0, a), s.substr(a + 1, b - a - 1), s.substr(b + 1)};
        double* dst[3] = {&g.lo, &g.hi, &g.step};
        for (int i = 0; i < 3; ++i) {
            *dst[i] = std::stod(parts[i], &used);
            if (used != parts[i].size())
                throw std::invalid_argument("trailing characters");
        }
        linear_grid(g); // validates
        return g;
    } catch (const std::logic_error&) {
        throw DomainError("--grid expects lo:hi:step, got '" + s + "'");
    }
}

void emit(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_file_atomic(out, text);
}

struct FigureArgs {
    std::string id;
    std::optional<double> beta, ebn0_db, gamma;
    std::optional<std::size_t> n, trials;
    std::optional<std::string> grid;
    std::uint64_t seed = 1;
    std::string out = "figures";
};

int run_figure(const FigureArgs& a)
{
    FigureOptions opt;
    opt.beta = a.beta;
    opt.ebn0_db = a.ebn0_db;
    opt.gamma = a.gamma;
    opt.n = a.n;
    opt.trials = a.trials;
    opt.seed = a.seed;
    if (a.grid)
        opt.grid = parse_grid(*a.grid);
    std::vector<int> ids;
    if (a.id == "all")
        ids = figure_ids();
    else {
        std::size_t used = 0;
        int id = 0;
        try {
            id = std::stoi(a.id, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used != a.id.size() || used == 0)
            throw DomainError("figure id must be an integer or 'all', got '" + a.id + "'");
        ids.push_back(id);
    }
    for (int id : ids)
        for (const auto& c : make_figure(id, opt)) {
            const auto path = std::filesystem::path(a.out) / (c.stem + ".csv");
            write_csv(path, c.curve, c.header);
            std::cout << path.string() << '\n';
        }
    return exit_ok;
}

struct CurveArgs {
    std::string formula;
    double beta = 1.0;
    std::size_t ns = 1;
    std::optional<double> gamma, ebn0_db;
    std::optional<std::string> grid;
    std::string axis = "ebn0";
    std::string out;
};

int run_curve(const CurveArgs& a)
{
    const Formula f = parse_formula(a.formula);
    const int modes = int(a.gamma.has_value()) + int(a.ebn0_db.has_value()) + int(a.grid.has_value());
    if (modes != 1)
        throw DomainError("curve needs exactly one of --gamma, --ebn0-db or --grid");

    SweepResult r;
    r.name = a.formula;
    r.y_label = "C_bps_per_hz";
    r.metadata["formula"] = a.formula;
    r.metadata["precondition"] = info(f).precondition;
    r.metadata["Ns"] = std::to_string(a.ns);
    HeaderLines header{{"parameters", "beta=" + format_number(a.beta) + ", Ns=" + std::to_string(a.ns)}};

    // Surfaces domain errors with the precondition text before any root finding.
    evaluate_checked(f, a.beta, 1.0, a.ns);

    if (a.gamma) {
        r.x_label = "gamma";
        r.x.push_back(*a.gamma);
        r.mean.push_back(evaluate_checked(f, a.beta, *a.gamma, a.ns));
        r.metadata["beta"] = format_number(a.beta);
    } else if (a.ebn0_db) {
        r.x_label = "ebn0_db";
        const EbN0Point p = at_ebn0(bind(f, a.beta, a.ns), a.beta, *a.ebn0_db);
        r.x.push_back(*a.ebn0_db);
        r.mean.push_back(p.capacity);
        r.metadata["beta"] = format_number(a.beta);
        r.metadata["gamma_solution"] = format_number(p.gamma);
    } else {
        const auto xs = linear_grid(parse_grid(*a.grid));
        r.metadata["grid"] = *a.grid;
        r.metadata["axis"] = a.axis;
        if (a.axis == "ebn0") {
            r.x_label = "ebn0_db";
            r.metadata["beta"] = format_number(a.beta);
            const auto pts = ebn0_on_grid(bind(f, a.beta, a.ns), a.beta, xs);
            r.x = xs;
            for (const auto& p : pts)
                r.mean.push_back(p.capacity);
        } else if (a.axis == "gamma_db") {
            r.x_label = "gamma_db";
            r.metadata["beta"] = format_number(a.beta);
            for (double x : xs) {
                r.x.push_back(x);
                r.mean.push_back(evaluate_checked(f, a.beta, from_db(x), a.ns));
            }
        } else {
            throw DomainError("--axis must be ebn0 or gamma_db");
        }
    }
    emit(a.out, render_csv(r, header));
    return exit_ok;
}

struct EnsembleArgs {
    std::string kind = "th";
    std::size_t n = 16;
    double beta = 0.5;
    std::size_t ns = 1;
    double gamma = 10.0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_ensemble(const EnsembleArgs& a)
{
    require(a.n >= 1, "--n must be positive");
    const auto k = static_cast<std::size_t>(std::llround(a.beta * static_cast<double>(a.n)));
    require(k >= 1, "--beta * --n must round to at least one user");
    EnsembleSpec spec;
    if (a.kind == "th")
        spec = EnsembleSpec::th(a.n, k, a.ns, a.seed);
    else if (a.kind == "ds")
        spec = EnsembleSpec::ds(a.n, k, a.seed);
    else
        throw DomainError("--kind must be th or ds");
    const SpreadingMatrix m = sample(spec);
    const SpectralSummary s = summarize(m, 4);

    std::string text = std::string("# ") + tool_version + '\n';
    text += "# ensemble: " + to_string(spec.kind) + '\n';
    text += "# N: " + std::to_string(spec.chips) + "\n# K: " + std::to_string(spec.users) + '\n';
    text += "# Ns: " + std::to_string(m.pulses_per_symbol()) + "\n# seed: " + std::to_string(a.seed) + '\n';
    text += "# beta: " + format_number(m.load()) + '\n';
    for (unsigned l = 1; l <= 4; ++l)
        text += "# m" + std::to_string(l) + ": " + format_number(s.moments[l - 1]) + '\n';
    text += "# normalized_rank: " + format_number(s.normalized_rank) + '\n';
    text += "# gamma: " + format_number(a.gamma) + '\n';
    text += "# logdet_bits_per_chip: " + format_number(logdet_capacity(m, a.gamma)) + '\n';
    text += "user,chip,value\n";
    const auto positions = nonzero_positions(m);
    for (std::size_t k = 0; k < positions.size(); ++k)
        for (const auto& p : positions[k])
            text += std::to_string(k) + ',' + std::to_string(p.block * m.hops() + p.slot) + ','
                    + format_number(p.sign * m.amplitude()) + '\n';
    emit(a.out, text);
    return exit_ok;
}

int run_validate(const std::string& suite, std::uint64_t seed, const std::string& out)
{
    const auto checks = run_suite(suite, seed);
    std::string text;
    bool ok = true;
    for (const auto& c : checks) {
        nlohmann::json j{{"name", c.name},
                         {"observed", c.observed},
                         {"expected", c.expected},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass}};
        text += j.dump() + '\n';
        ok = ok && c.pass;
    }
    emit(out, text);
    std::cerr << (ok ? "validate " + suite + ": all checks passed\n" : "validate " + suite + ": FAILED\n");
    return ok ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral efficiency of random time-hopping and direct-sequence CDMA"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    FigureArgs fa;
    auto* fig = app.add_subcommand("figure", "write the CSV curves of one figure (or 'all')");
    fig->add_option("id", fa.id, "figure id: 2..11 or all")->required();
    fig->add_option("--beta", fa.beta, "load K/N");
    fig->add_option("--ebn0-db", fa.ebn0_db, "E_b/N0 in dB for curves against beta");
    fig->add_option("--gamma", fa.gamma, "SNR for the interference histogram");
    fig->add_option("--n", fa.n, "chips per symbol for Monte Carlo marks");
    fig->add_option("--trials", fa.trials, "Monte Carlo trials (samples for figure 4)");
    fig->add_option("--grid", fa.grid, "main abscissa grid lo:hi:step");
    fig->add_option("--seed", fa.seed, "master seed")->capture_default_str();
    fig->add_option("--out", fa.out, "output directory")->capture_default_str();

    CurveArgs ca;
    auto* cur = app.add_subcommand("curve", "evaluate one capacity formula");
    cur->add_option("formula", ca.formula, "formula name")->required();
    cur->add_option("--beta", ca.beta, "load K/N")->capture_default_str();
    cur->add_option("--ns", ca.ns, "pulses per symbol")->capture_default_str();
    cur->add_option("--gamma", ca.gamma, "SNR (linear)");
    cur->add_option("--ebn0-db", ca.ebn0_db, "E_b/N0 in dB");
    cur->add_option("--grid", ca.grid, "grid lo:hi:step along --axis");
    cur->add_option("--axis", ca.axis, "grid axis: ebn0 (dB) or gamma_db")
        ->check(CLI::IsMember({"ebn0", "gamma_db"}))
        ->capture_default_str();
    cur->add_option("--out", ca.out, "output file (default stdout)");

    EnsembleArgs ea;
    auto* ens = app.add_subcommand("ensemble", "draw one spreading matrix and print its pulses and spectrum");
    ens->add_option("--kind", ea.kind, "th or ds")->check(CLI::IsMember({"th", "ds"}))->capture_default_str();
    ens->add_option("--n", ea.n, "chips per symbol")->capture_default_str();
    ens->add_option("--beta", ea.beta, "load K/N")->capture_default_str();
    ens->add_option("--ns", ea.ns, "pulses per symbol")->capture_default_str();
    ens->add_option("--gamma", ea.gamma, "SNR for the log-det column")->capture_default_str();
    ens->add_option("--seed", ea.seed, "seed")->capture_default_str();
    ens->add_option("--out", ea.out, "output file (default stdout)");

    std::string suite = "all";
    std::uint64_t vseed = 1;
    std::string vout;
    auto* val = app.add_subcommand("validate", "run invariant suites, JSON lines on stdout");
    val->add_option("suite", suite, "moments, rank, receivers, entropy, slopes or all")
        ->check(CLI::IsMember({"moments", "rank", "receivers", "entropy", "slopes", "all"}))
        ->capture_default_str();
    val->add_option("--seed", vseed, "seed")->capture_default_str();
    val->add_option("--out", vout, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*fig)
            return run_figure(fa);
        if (*cur)
            return run_curve(ca);
        if (*ens)
            return run_ensemble(ea);
        return run_validate(suite, vseed, vout);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}
