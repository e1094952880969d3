// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "thspeff/csv.hpp"
#include "thspeff/figures.hpp"
#include "thspeff/validation.hpp"

using namespace thspeff;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("analytic CSV layout", "[io]")
{
    SweepResult r;
    r.name = "demo";
    r.x_label = "beta";
    r.y_label = "C";
    r.x = {0.5, 1.0};
    r.mean = {0.25, 1.0 / 3.0};
    const std::string text = render_csv(r, {{"figure", "test"}});
    CHECK(text.rfind(std::string("# ") + tool_version + "\n", 0) == 0);
    CHECK(text.find("# tag: analytic\n") != std::string::npos);
    CHECK(text.find("\nx,y\n0.5,0.25\n1,0.3333333333333333\n") != std::string::npos);
}

TEST_CASE("empirical CSV carries error columns", "[io]")
{
    SweepResult r;
    r.name = "mc";
    r.tag = CurveTag::empirical;
    r.x = {1.0};
    r.mean = {2.0};
    r.std = {0.5};
    r.std_error = {0.05};
    r.trials = {100};
    const std::string text = render_csv(r, {});
    CHECK(text.find("x,y,std,std_error,trials\n1,2,0.5,0.05,100\n") != std::string::npos);
}

TEST_CASE("atomic write leaves no temporary", "[io]")
{
    const auto dir = std::filesystem::temp_directory_path() / "thspeff_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "sub" / "a.csv";
    write_file_atomic(path, "hello\n");
    CHECK(slurp(path) == "hello\n");
    write_file_atomic(path, "again\n");
    CHECK(slurp(path) == "again\n");
    CHECK_FALSE(std::filesystem::exists(dir / "sub" / "a.csv.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("linear grids", "[io]")
{
    CHECK(linear_grid({0.0, 1.0, 0.25}) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(linear_grid({-1.5, 19.5, 1.5}).size() == 15);
    CHECK(linear_grid(default_ebn0_grid).size() == 105);
    CHECK_THROWS_AS(linear_grid({1.0, 0.0, 0.1}), DomainError);
}

TEST_CASE("figure output is reproducible and tagged", "[io]")
{
    FigureOptions opt;
    opt.grid = Grid{0.0, 20.0, 5.0};
    const auto a = make_figure(2, opt);
    const auto b = make_figure(2, opt);
    REQUIRE(a.size() == b.size());
    bool empirical = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(render_csv(a[i].curve, a[i].header) == render_csv(b[i].curve, b[i].header));
        empirical = empirical || a[i].curve.empirical();
        const std::string text = render_csv(a[i].curve, a[i].header);
        CHECK(text.find("# seed: 1\n") != std::string::npos);
        CHECK(text.find("# figure: 2") != std::string::npos);
    }
    CHECK(empirical);
    CHECK_THROWS_AS(make_figure(1, opt), DomainError);
    CHECK_THROWS_AS(make_figure(12, opt), DomainError);
}

TEST_CASE("figure 7 has the DS linear receivers and the TH curve", "[io]")
{
    FigureOptions opt;
    opt.beta = 0.9;
    std::vector<std::string> names;
    for (const auto& c : make_figure(7, opt))
        names.push_back(c.curve.name);
    CHECK(std::find(names.begin(), names.end(), "mmse_ds") != names.end());
    CHECK(std::find(names.begin(), names.end(), "deco_ds") != names.end());
    CHECK(std::find(names.begin(), names.end(), "linear_th_ns1") != names.end());
}

TEST_CASE("receiver validation suite passes", "[io]")
{
    for (const auto& c : run_suite("receivers"))
        CHECK(c.pass);
    CHECK_THROWS_AS(run_suite("bogus"), DomainError);
}
