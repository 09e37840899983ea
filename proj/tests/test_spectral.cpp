#include <doctest.h>

#include <cmath>

#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"
#include "support.hpp"

using namespace biphoton;
using biphoton::testing::sinc;

namespace {

const double kBand = angular_bandwidth(810.0 * kNanometre, 10.0 * kNanometre);

/// Straight trapezoid sum with std::cos at every node.
double direct_e1(const SpectralDensity& sd, const FrequencyGrid& g, double tau)
{
    const auto w = g.trapezoid_weights();
    double norm = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        norm += w[k] * sd(g.node(k));
        acc += w[k] * sd(g.node(k)) * std::cos(g.node(k) * tau);
    }
    return acc / norm;
}

} // namespace

TEST_CASE("frequency grid is symmetric and contains zero")
{
    const FrequencyGrid g(1e13, 101);
    CHECK(g.node(g.center()) == 0.0);
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(g.node(g.mirror(k)) == -g.node(k));
    CHECK(g.node(0) == doctest::Approx(-1e13));
    CHECK_THROWS_AS(FrequencyGrid(1e13, 100), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(-1.0, 101), std::invalid_argument);
}

TEST_CASE("normalize")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    const auto grid = default_frequency_grid(rect);

    SUBCASE("rectangular at height 1/width is unchanged")
    {
        CHECK(integrate(rect, grid) == doctest::Approx(1.0).epsilon(1e-12));
        const auto n = normalize(rect, grid);
        CHECK(n(0.0) == doctest::Approx(1.0 / kBand).epsilon(1e-12));
    }
    SUBCASE("constant tabulated density rescales to 1/W")
    {
        const double w = 2e13;
        const auto tab = SpectralDensity::tabulated({{-w / 2, 2.0}, {w / 2, 2.0}});
        const FrequencyGrid g(w / 2, 1001);
        const auto n = normalize(tab, g);
        CHECK(n(0.0) == doctest::Approx(1.0 / w).epsilon(1e-12));
        CHECK(integrate(n, g) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("gaussian with arbitrary prefactor")
    {
        const auto g = SpectralDensity(Gaussian{1e13}, 37.5);
        const auto fg = default_frequency_grid(g);
        CHECK(std::abs(integrate(normalize(g, fg), fg) - 1.0) <= 1e-9);
    }
    SUBCASE("zero density")
    {
        const auto zero = SpectralDensity::tabulated({{-1.0, 0.0}, {1.0, 0.0}});
        CHECK_THROWS_AS(normalize(zero, FrequencyGrid(1.0, 11)), ZeroDensity);
    }
}

TEST_CASE("first-order envelope of a rectangular density")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    const auto grid = default_frequency_grid(rect);
    const DiscreteSpectrum s(rect, grid);

    CHECK(std::abs(s.first_order(0.0) - 1.0) <= 1e-9);
    CHECK(std::abs(s.first_order(2.0 * kPi / kBand)) <= 1e-6);
    const double tau = 100.0 * kFemtosecond;
    CHECK(std::abs(s.first_order(tau) - sinc(kBand * tau / 2.0)) <= 1e-8);
    // recurrence against plain summation
    for (double t : {3.7e-15, 55e-15, 218e-15, 480e-15})
        CHECK(std::abs(s.first_order(t) - direct_e1(rect, grid, t)) <= 1e-12);
}

TEST_CASE("second-order envelope")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    const auto grid = default_frequency_grid(rect);
    const DiscreteSpectrum s(rect, grid);
    CHECK(std::abs(s.second_order(0.0) - 1.0) <= 1e-9);
    CHECK(std::abs(s.second_order(kPi / kBand)) <= 1e-6);
    for (double t : {0.0, 1e-15, 77e-15, 301e-15})
        CHECK(s.second_order(t) == s.first_order(2.0 * t));

    const double sigma = 1.2e13;
    const auto gauss = SpectralDensity::gaussian(sigma);
    const auto gg = default_frequency_grid(gauss);
    for (double t : {0.0, 20e-15, 50e-15, 120e-15})
        CHECK(std::abs(envelope_second_order(gauss, gg, t) - std::exp(-2.0 * sigma * sigma * t * t)) <= 1e-8);
}

TEST_CASE("envelope bounds and evenness")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    const DiscreteSpectrum s(rect, default_frequency_grid(rect));
    for (int i = 0; i <= 400; ++i) {
        const double t = (i - 200) * 2.5e-15;
        CHECK(std::abs(s.first_order(t)) <= 1.0 + 1e-12);
        CHECK(s.first_order(t) == doctest::Approx(s.first_order(-t)).epsilon(1e-12));
    }
}

TEST_CASE("even-symmetry flag")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    CHECK(rect.is_even_on(default_frequency_grid(rect)));
    const auto skew = SpectralDensity::tabulated({{-1e13, 0.0}, {0.0, 1.0}, {1e13, 3.0}});
    const FrequencyGrid g(1e13, 101);
    CHECK_FALSE(skew.is_even_on(g));
    CHECK_FALSE(DiscreteSpectrum(skew, g).is_even());
}

TEST_CASE("first zero scales inversely with bandwidth")
{
    const auto narrow = SpectralDensity::rectangular(kBand);
    const auto wide = SpectralDensity::rectangular(2.0 * kBand);
    const double z1 = envelope_first_zero(DiscreteSpectrum(narrow, default_frequency_grid(narrow)), 1e-12);
    const double z2 = envelope_first_zero(DiscreteSpectrum(wide, default_frequency_grid(wide)), 1e-12);
    CHECK(z1 == doctest::Approx(2.0 * kPi / kBand).epsilon(1e-9));
    CHECK(std::abs(z1 / z2 - 2.0) / 2.0 <= 1e-6);
    CHECK(z1 == doctest::Approx(218.8e-15).epsilon(1e-3));
}

TEST_CASE("grid refinement changes the default envelope by less than 1e-6")
{
    const auto rect = SpectralDensity::rectangular(kBand);
    const auto coarse_grid = default_frequency_grid(rect);
    const FrequencyGrid fine_grid(coarse_grid.half_width(), 2 * coarse_grid.size() - 1);
    const DiscreteSpectrum coarse(rect, coarse_grid);
    const DiscreteSpectrum fine(rect, fine_grid);
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double t = i * 1e-15;
        worst = std::max(worst, std::abs(coarse.first_order(t) - fine.first_order(t)));
    }
    CHECK(worst < 1e-6);
}
