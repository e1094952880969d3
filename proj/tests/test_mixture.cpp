// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "thspeff/capacity.hpp"
#include "thspeff/mixture.hpp"
#include "thspeff/quadrature.hpp"

using namespace thspeff;
using Catch::Approx;

TEST_CASE("adaptive quadrature", "[quadrature]")
{
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value == Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value == Approx(2.0 / 3.0).epsilon(1e-10));
    const auto kink = integrate([](double x) { return std::abs(x - 0.3); }, {0.0, 0.3, 1.0});
    CHECK(kink.value == Approx(0.045 + 0.245).epsilon(1e-14));
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-12, 50}), NumericalError);
}

TEST_CASE("single Gaussian entropy", "[mixture]")
{
    CHECK(mixture_entropy({{1.0}, {1.0}}) == Approx(std::log2(std::numbers::pi * std::numbers::e)).margin(1e-8));
    CHECK(mixture_entropy({{0.5, 0.5}, {1.0, 1.0}}) == Approx(std::log2(std::numbers::pi * std::numbers::e)).margin(1e-8));
    CHECK(mixture_entropy({{1.0}, {1e4}}) == Approx(std::log2(std::numbers::pi * std::numbers::e * 1e4)).margin(1e-8));
}

TEST_CASE("entropy bounds sandwich", "[mixture]")
{
    const GaussianMixture m{{0.2, 0.5, 0.3}, {0.5, 3.0, 40.0}};
    const double h = mixture_entropy(m);
    const auto b = entropy_bounds(m);
    CHECK(h > b.lower());
    CHECK(h < b.upper());
    // Widely separated components approach the upper bound.
    const GaussianMixture far{{0.5, 0.5}, {1.0, 1e8}};
    CHECK(mixture_entropy(far) == Approx(entropy_bounds(far).upper()).margin(0.05));
}

TEST_CASE("mixture validation", "[mixture]")
{
    CHECK_THROWS_AS(GaussianMixture({{0.5, 0.4}, {1.0, 2.0}}).validate(), DomainError);
    CHECK_THROWS_AS(GaussianMixture({{1.0}, {0.0}}).validate(), DomainError);
    CHECK_THROWS_AS(GaussianMixture({{1.0}, {1.0, 2.0}}).validate(), DomainError);
}

TEST_CASE("interference mixture moments", "[mixture]")
{
    for (double b : {0.5, 1.0, 2.0})
        for (double g : {1.0, 10.0})
            for (std::size_t ns : {1u, 2u}) {
                const auto pz = mixture_pz(b, g, ns);
                CHECK(pz.second_moment() == Approx(1.0 + b * g).epsilon(1e-11));
                CHECK(pz.kurtosis() == Approx(kurtosis_pz(b, g, ns)).epsilon(1e-10));
                CHECK(mixture_py(b, g, ns).second_moment() == Approx(1.0 + g + b * g).epsilon(1e-11));
            }
    CHECK(kurtosis_pz(1.0, 0.0, 1) == 2.0);
    CHECK(kurtosis_pz(1.0, 1e9, 1) == Approx(4.0).epsilon(1e-8));
    CHECK(kurtosis_pz(1e6, 10.0, 1) == Approx(2.0).margin(1e-5));
    const auto z0 = mixture_pz(1.0, 0.0, 1);
    CHECK(z0.size() == 1);
    CHECK(z0.variances[0] == 1.0);
    CHECK(mixture_py(1.0, 0.0, 1).variances[0] == 1.0);
}

TEST_CASE("kurtosis by quadrature", "[mixture]")
{
    const auto pz = mixture_pz(1.0, from_db(13.0), 1);
    const double m2 = mixture_moment_quadrature(pz, 1), m4 = mixture_moment_quadrature(pz, 2);
    CHECK(m2 == Approx(pz.second_moment()).epsilon(1e-10));
    CHECK(m4 / (m2 * m2) == Approx(kurtosis_pz(1.0, from_db(13.0), 1)).margin(1e-6));
}

TEST_CASE("real marginal density integrates to one", "[mixture]")
{
    const auto pz = mixture_pz(1.0, 5.0, 1);
    const double s = integrate([&](double x) { return pz.real_marginal_density(x); }, -200.0, 200.0).value;
    CHECK(s == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("entropy difference equals difference of entropies", "[mixture]")
{
    const auto py = mixture_py(1.0, 10.0, 2), pz = mixture_pz(1.0, 10.0, 2);
    CHECK(mixture_entropy_difference(py, pz) == Approx(mixture_entropy(py) - mixture_entropy(pz)).margin(1e-8));
}
