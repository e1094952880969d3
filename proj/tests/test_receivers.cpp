// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>

#include "thspeff/receivers.hpp"

using namespace thspeff;
using Catch::Approx;

namespace {

SpreadingMatrix ns1(std::size_t n, std::vector<std::pair<std::uint32_t, std::int8_t>> cols)
{
    std::vector<Pulse> p;
    for (auto [slot, sign] : cols)
        p.push_back({slot, sign});
    return SpreadingMatrix(EnsembleSpec::th(n, cols.size(), 1), p);
}

} // namespace

TEST_CASE("crosscorrelations of sparse columns", "[receivers]")
{
    CHECK(crosscorrelations(ns1(2, {{0, 1}, {0, -1}}))(0, 1) == -1.0);
    const SpreadingMatrix two(EnsembleSpec::th(4, 2, 2), {{0, 1}, {1, 1}, {0, 1}, {0, -1}});
    CHECK(crosscorrelations(two)(0, 1) == Approx(0.5));
    CHECK(crosscorrelations(ns1(3, {{0, 1}, {1, 1}, {2, -1}})) == DenseMatrix::identity(3));
}

TEST_CASE("occupancy counts users per chip", "[receivers]")
{
    CHECK(occupancy(ns1(3, {{0, 1}, {1, 1}, {2, 1}})) == std::vector<std::size_t>{1, 1, 1});
    CHECK(occupancy(ns1(3, {{0, 1}, {0, 1}, {0, -1}})) == std::vector<std::size_t>{3, 3, 3});
    CHECK(occupancy(ns1(2, {{0, 1}, {0, 1}, {1, 1}})) == std::vector<std::size_t>{2, 2, 1});
}

TEST_CASE("closed-form gains on small instances", "[receivers]")
{
    const auto orth = ns1(3, {{0, 1}, {1, -1}, {2, 1}});
    CHECK(max_abs_difference(gain_closed_form(orth, {1e-14, 1.0}).gains, DenseMatrix::identity(3)) < 1e-12);

    const auto pair = ns1(2, {{0, 1}, {0, -1}});
    const auto g = gain_closed_form(pair, LinearFrontEnd::mmse(1.0)).gains;
    CHECK(g(0, 0) == Approx(1.0 / 3.0));
    CHECK(std::abs(g(0, 1)) == Approx(1.0 / 3.0));

    const auto m = sample(EnsembleSpec::th(6, 8, 1, 3));
    CHECK(max_abs_difference(gain_closed_form(m, LinearFrontEnd::sumf()).gains, crosscorrelations(m)) == 0.0);
}

TEST_CASE("closed form agrees with the direct solve", "[receivers]")
{
    for (unsigned s = 0; s < 30; ++s) {
        const auto m = sample(EnsembleSpec::th(2 + s % 15, 1 + (7 * s) % 25, 1, s));
        for (double alpha : {1e-6, 0.1, 1.0})
            for (double eta : {0.0, 1.0}) {
                const LinearFrontEnd fe{alpha, eta};
                CHECK(max_abs_difference(gain_closed_form(m, fe).gains, gain_direct(m, fe).gains) < 1e-10);
                CHECK(max_abs_difference(noise_covariance_closed_form(m, fe, 0.5),
                                         noise_covariance_direct(m, fe, 0.5))
                      < 1e-10);
            }
    }
}

TEST_CASE("DS MMSE and decorrelator", "[receivers]")
{
    const SpreadingMatrix orth(EnsembleSpec::ds(2, 2), {{0, 1}, {0, 1}, {0, 1}, {0, -1}});
    const auto g = gain_direct(orth, LinearFrontEnd::mmse(1.0)).gains;
    CHECK(g(0, 0) == Approx(0.5));
    CHECK(g(1, 1) == Approx(0.5));
    CHECK(g(0, 1) == Approx(0.0).margin(1e-15));

    const auto m = sample(EnsembleSpec::ds(16, 8, 5));
    const auto a = gain_direct(m, {1e-8, 1.0}).gains;
    const auto b = gain_direct(m, {1e-12, 1.0}).gains;
    CHECK(max_abs_difference(a, b) < 1e-6);
    CHECK(max_abs_difference(b, DenseMatrix::identity(8)) < 1e-9);
}

TEST_CASE("rank-deficient decorrelator is flagged or rejected", "[receivers]")
{
    const auto m = ns1(3, {{0, 1}, {0, 1}});
    const auto sol = linear_front_end(m, LinearFrontEnd::decorrelator());
    CHECK(sol.near_singular);
    CHECK_THROWS_AS(linear_front_end(m, {0.0, 1.0}), NumericalError);
}

TEST_CASE("front end parameters are validated", "[receivers]")
{
    CHECK_THROWS_AS(LinearFrontEnd({0.0, 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(LinearFrontEnd({1.0, 0.5}).validate(), DomainError);
    CHECK_THROWS_AS(LinearFrontEnd::mmse(0.0), DomainError);
}

TEST_CASE("SINR from occupancy", "[receivers]")
{
    CHECK(sinr_from_occupancy(0, 3.0) == 3.0);
    CHECK(sinr_from_occupancy(1, 1.0) == 0.5);
    CHECK(sinr_from_occupancy(4, 1e12) == Approx(0.25));
}

TEST_CASE("user-1 SINR is the same for every linear front end", "[receivers]")
{
    for (unsigned s = 0; s < 20; ++s) {
        const auto m = sample(EnsembleSpec::th(10, 12, 1, s));
        std::size_t v = 0;
        for (std::size_t k = 1; k < m.cols(); ++k)
            v += m.pulse(k, 0).slot == m.pulse(0, 0).slot;
        const double ref = sinr_from_occupancy(v, 10.0);
        for (const LinearFrontEnd fe : {LinearFrontEnd::sumf(), LinearFrontEnd::mmse(10.0), LinearFrontEnd{1e-6, 1.0}})
            CHECK(conditional_sinr_user1(m, fe, 10.0) == Approx(ref).epsilon(1e-12));
        CHECK(sumf_interference(m, 0) == Approx(static_cast<double>(v)));
    }
}
