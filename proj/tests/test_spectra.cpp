// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>

#include "thspeff/spectra.hpp"

using namespace thspeff;
using Catch::Approx;

namespace {

SpreadingMatrix columns(std::size_t n, std::vector<std::pair<std::uint32_t, std::int8_t>> cols)
{
    std::vector<Pulse> p;
    for (auto [slot, sign] : cols)
        p.push_back({slot, sign});
    return SpreadingMatrix(EnsembleSpec::th(n, cols.size(), 1), p);
}

} // namespace

TEST_CASE("two users on one chip give eigenvalues (0, 2)", "[spectra]")
{
    const auto m = columns(2, {{0, 1}, {0, 1}});
    CHECK(gram_eigenvalues(m) == std::vector<double>{0.0, 2.0});
    const auto s = summarize(m, 2);
    CHECK(s.moments[1] == 2.0);
    CHECK(s.normalized_rank == 0.5);
    CHECK(normalized_rank(m) == 0.5);
    CHECK(logdet_capacity(m, 1.0) == Approx(0.5 * std::log2(3.0)).epsilon(1e-14));
    CHECK(eigen_capacity(s.eigenvalues, 1.0) == Approx(0.5 * std::log2(3.0)).epsilon(1e-14));
}

TEST_CASE("one user has a single unit eigenvalue", "[spectra]")
{
    for (auto spec : {EnsembleSpec::th(6, 1, 1, 1), EnsembleSpec::th(6, 1, 3, 1), EnsembleSpec::ds(6, 1, 1)}) {
        const auto m = sample(spec);
        const auto eig = gram_eigenvalues(m);
        REQUIRE(eig.size() == 6);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(eig[i] == Approx(0.0).margin(1e-14));
        CHECK(eig[5] == Approx(1.0).epsilon(1e-14));
        CHECK(logdet_capacity(m, 1.0) == Approx(1.0 / 6.0).epsilon(1e-13));
    }
}

TEST_CASE("orthogonal DS columns have unit eigenvalues", "[spectra]")
{
    const std::vector<Pulse> p{{0, 1}, {0, 1}, {0, 1}, {0, -1}};
    const SpreadingMatrix m(EnsembleSpec::ds(2, 2), p);
    const auto s = summarize(m, 4);
    for (double v : s.eigenvalues)
        CHECK(v == Approx(1.0).epsilon(1e-14));
    for (double mo : s.moments)
        CHECK(mo == Approx(1.0).epsilon(1e-13));
    CHECK(s.normalized_rank == 1.0);
}

TEST_CASE("m1 equals the load exactly", "[spectra]")
{
    for (auto spec : {EnsembleSpec::th(40, 17, 1, 2), EnsembleSpec::th(40, 17, 4, 2), EnsembleSpec::ds(40, 17, 2)})
        CHECK(summarize(sample(spec), 1).moments[0] == 17.0 / 40.0);
}

TEST_CASE("orthogonal columns give rank K/N", "[spectra]")
{
    CHECK(normalized_rank(columns(5, {{0, 1}, {3, -1}, {4, 1}})) == 3.0 / 5.0);
    CHECK(normalized_rank(columns(2, {{0, 1}, {1, 1}})) == 1.0);
}

TEST_CASE("Ns=1 exact path matches the eigen path", "[spectra]")
{
    const auto m = sample(EnsembleSpec::th(30, 45, 1, 4));
    const auto exact = summarize(m, 6);
    const auto ed = symmetric_eigen(chip_gram(m));
    for (unsigned l = 1; l <= 6; ++l) {
        long double acc = 0;
        for (double v : ed.values)
            acc += std::pow(static_cast<long double>(v), static_cast<int>(l));
        CHECK(exact.moments[l - 1] == Approx(static_cast<double>(acc / 30)).epsilon(1e-10));
    }
    CHECK(logdet_capacity(m, 7.0) == Approx(eigen_capacity(exact.eigenvalues, 7.0)).epsilon(1e-12));
}

TEST_CASE("general path agrees between K<N and K>N reductions", "[spectra]")
{
    for (auto spec : {EnsembleSpec::th(24, 10, 3, 9), EnsembleSpec::th(24, 40, 3, 9), EnsembleSpec::ds(24, 30, 9)}) {
        const auto m = sample(spec);
        const auto s = summarize(m, 4);
        const auto full = symmetric_eigen(chip_gram(m));
        for (std::size_t i = 0; i < full.values.size(); ++i)
            CHECK(s.eigenvalues[i] == Approx(std::max(0.0, full.values[i])).margin(1e-11));
        CHECK(logdet_capacity(m, 3.0) == Approx(eigen_capacity(s.eigenvalues, 3.0)).epsilon(1e-11));
    }
}

TEST_CASE("small gamma logdet is gamma beta / ln2 to first order", "[spectra]")
{
    const auto m = sample(EnsembleSpec::th(20, 10, 2, 1));
    const double g = 1e-7;
    CHECK(logdet_capacity(m, g) / g == Approx(0.5 / std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("esd is a step CDF", "[spectra]")
{
    const auto s = summarize(columns(4, {{0, 1}, {0, 1}, {1, 1}}), 2);
    CHECK(s.esd(-1.0) == 0.0);
    CHECK(s.esd(0.0) == 0.5);
    CHECK(s.esd(1.0) == 0.75);
    CHECK(s.esd(2.0) == 1.0);
}

TEST_CASE("moment order is checked", "[spectra]")
{
    const auto s = summarize(columns(2, {{0, 1}}), 3);
    CHECK_THROWS_AS(esd_moment(s, 0), DomainError);
    CHECK_THROWS_AS(esd_moment(s, 4), DomainError);
    CHECK_THROWS_AS(logdet_capacity(columns(2, {{0, 1}}), 0.0), DomainError);
}
