#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "biphoton/errors.hpp"
#include "biphoton/spatial.hpp"

using namespace biphoton;

namespace {

const SpatialGrid kGrid = SpatialGrid::default_grid();
const double kWaist = kDefaultPumpWaist;

SpatialAmplitude hg0() { return gaussian_profile(kGrid, kWaist); }
SpatialAmplitude hg1() { return hermite_gauss1_profile(kGrid, kWaist); }

SpatialAmplitude random_profile(std::mt19937& rng)
{
    std::normal_distribution<double> d;
    std::vector<Complex> v(kGrid.size());
    for (auto& z : v)
        z = Complex(d(rng), d(rng));
    return SpatialAmplitude::normalized(kGrid, std::move(v));
}

} // namespace

TEST_CASE("spatial grid flip is index reversal")
{
    for (std::size_t i = 0; i < kGrid.size(); ++i)
        CHECK(kGrid.position(kGrid.mirror(i)) == -kGrid.position(i));
    CHECK(kGrid.position(kGrid.center()) == 0.0);
    CHECK_THROWS_AS(SpatialGrid(1e-3, 10), std::invalid_argument);
}

TEST_CASE("amplitudes are normalized")
{
    CHECK_THROWS_AS(SpatialAmplitude(kGrid, std::vector<Complex>(kGrid.size(), 1.0)), InvalidState);
    CHECK_THROWS_AS(SpatialAmplitude::normalized(kGrid, std::vector<Complex>(kGrid.size(), 0.0)), ZeroDensity);
    CHECK(std::abs(inner_product(hg0(), hg0()) - 1.0) <= 1e-12);
    CHECK(std::abs(inner_product(hg0(), hg1())) <= 1e-12);
}

TEST_CASE("flip overlap")
{
    SUBCASE("coherent even Gaussian")
    {
        const auto a = flip_overlap(SpatialDensityOperator::coherent(hg0()));
        CHECK(std::abs(a.magnitude - 1.0) <= 1e-9);
        CHECK(std::abs(a.phase) <= 1e-9);
    }
    SUBCASE("coherent odd HG1")
    {
        const auto a = flip_overlap(SpatialDensityOperator::coherent(hg1()));
        CHECK(std::abs(a.magnitude - 1.0) <= 1e-9);
        CHECK(std::abs(std::abs(a.phase) - kPi) <= 1e-9);
    }
    SUBCASE("incoherent: single anti-diagonal survivor, linear in spacing")
    {
        const auto phi = hg0();
        const auto a = flip_overlap(SpatialDensityOperator::incoherent(phi));
        CHECK(a.magnitude == doctest::Approx(std::norm(phi[kGrid.center()]) * kGrid.spacing()).epsilon(1e-14));
        CHECK(a.magnitude <= 0.02);

        const SpatialGrid fine(kGrid.half_width(), 2 * kGrid.size() - 1);
        const auto b = flip_overlap(SpatialDensityOperator::incoherent(gaussian_profile(fine, kWaist)));
        CHECK(b.magnitude / a.magnitude == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("matches the pump parity overlap for pure states, any global phase")
    {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            const auto phi = random_profile(rng);
            const double m = flip_overlap(SpatialDensityOperator::coherent(phi)).magnitude;
            CHECK(m == doctest::Approx(pump_parity_overlap(phi).magnitude).epsilon(1e-12));
            CHECK(m <= 1.0 + 1e-9);
            std::vector<Complex> rotated(phi.values());
            for (auto& z : rotated)
                z *= std::polar(1.0, 1.234);
            const auto r = flip_overlap(SpatialDensityOperator::coherent(SpatialAmplitude(kGrid, rotated)));
            const auto o = flip_overlap(SpatialDensityOperator::coherent(phi));
            CHECK(r.magnitude == doctest::Approx(o.magnitude).epsilon(1e-12));
            CHECK(r.phase == doctest::Approx(o.phase).epsilon(1e-9));
        }
    }
}

TEST_CASE("pump parity overlap")
{
    const auto even = pump_parity_overlap(hg0());
    CHECK(std::abs(even.magnitude - 1.0) <= 1e-12);
    CHECK(std::abs(even.phase) <= 1e-12);
    const auto odd = pump_parity_overlap(hg1());
    CHECK(std::abs(odd.magnitude - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(odd.phase) - kPi) <= 1e-12);

    // shifted Gaussian, offset one waist: direct summation of the defining integral
    const auto shifted = gaussian_profile(kGrid, kWaist, kWaist);
    Complex direct = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const double x = kGrid.position(i);
        const double f = std::exp(-std::pow((x - kWaist) / kWaist, 2));
        const double g = std::exp(-std::pow((-x - kWaist) / kWaist, 2));
        direct += f * g;
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i)
        norm += std::exp(-2.0 * std::pow((kGrid.position(i) - kWaist) / kWaist, 2));
    const auto beta = pump_parity_overlap(shifted);
    CHECK(beta.magnitude < 1.0);
    CHECK(beta.magnitude == doctest::Approx(std::abs(direct) / norm).epsilon(1e-12));
    CHECK(beta.magnitude == doctest::Approx(std::exp(-2.0)).epsilon(1e-3));
}

TEST_CASE("parity decomposition")
{
    const auto e = parity_decompose(hg0());
    CHECK(e.even_norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.odd_norm() <= 1e-28);
    const auto o = parity_decompose(hg1());
    CHECK(o.odd_norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(o.even_norm() <= 1e-28);

    std::vector<Complex> sup(kGrid.size());
    for (std::size_t i = 0; i < sup.size(); ++i)
        sup[i] = (hg0()[i] + hg1()[i]) / std::sqrt(2.0);
    const SpatialAmplitude s(kGrid, sup);
    const auto p = parity_decompose(s);
    CHECK(std::abs(p.even_norm() - 0.5) <= 1e-12);
    CHECK(std::abs(p.odd_norm() - 0.5) <= 1e-12);
    CHECK(p.even_norm() + p.odd_norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < sup.size(); ++i)
        CHECK(std::abs(p.even[i] + p.odd[i] - sup[i]) <= 4e-16 * (std::abs(sup[i]) + std::abs(sup[sup.size() - 1 - i])));

    // idempotent: the even part has no odd part
    const auto again = parity_decompose(SpatialAmplitude::normalized(kGrid, p.even));
    CHECK(again.odd_norm() <= 1e-28);
}

TEST_CASE("density operator invariants")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    const SpatialGrid g(1e-3, 3);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_NOTHROW(SpatialDensityOperator::general(g, m));
    m(0, 1) = 0.3; // not Hermitian
    CHECK_THROWS_AS(SpatialDensityOperator::general(g, m), InvalidState);
    m(1, 0) = 0.3;
    m(0, 1) = 0.3;
    m(2, 2) = 0.1; // trace 1.1
    CHECK_THROWS_AS(SpatialDensityOperator::general(g, m), InvalidState);
    m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 1.2;
    m(1, 1) = -0.2;
    CHECK_THROWS_AS(SpatialDensityOperator::general(g, m), NotPositive);
}

TEST_CASE("coherent-mode decomposition")
{
    SUBCASE("coherent state is rank one")
    {
        const auto modes = eigendecompose(SpatialDensityOperator::coherent(hg1()));
        REQUIRE(modes.size() == 1);
        CHECK(modes[0].weight == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(std::abs(inner_product(modes[0].mode, hg1())) - 1.0) <= 1e-9);
    }
    SUBCASE("incoherent state weights are the grid intensities")
    {
        const auto phi = hg0();
        const auto modes = eigendecompose(SpatialDensityOperator::incoherent(phi));
        CHECK(modes.size() == kGrid.size());
        std::vector<double> expected;
        for (std::size_t i = 0; i < phi.size(); ++i)
            expected.push_back(std::norm(phi[i]) * kGrid.spacing());
        std::sort(expected.rbegin(), expected.rend());
        double total = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            CHECK(std::abs(modes[i].weight - expected[i]) <= 1e-12);
            total += modes[i].weight;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
    SUBCASE("equal mixture of HG0 and HG1")
    {
        const Eigen::MatrixXcd rho = 0.5 * SpatialDensityOperator::coherent(hg0()).matrix() +
                                     0.5 * SpatialDensityOperator::coherent(hg1()).matrix();
        const auto op = SpatialDensityOperator::general(kGrid, rho);
        const auto modes = eigendecompose(op);
        REQUIRE(modes.size() == 2);
        CHECK(modes[0].weight == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(modes[1].weight == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::abs(inner_product(modes[0].mode, modes[1].mode)) <= 1e-9);
        Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        for (const auto& m : modes)
            rebuilt += m.weight * SpatialDensityOperator::coherent(m.mode).matrix();
        CHECK((rebuilt - rho).cwiseAbs().maxCoeff() <= 1e-8);
        // each mode lies in span{HG0, HG1}
        for (const auto& m : modes) {
            const double in_span = std::norm(inner_product(hg0(), m.mode)) + std::norm(inner_product(hg1(), m.mode));
            CHECK(in_span == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("density matrix CSV round trip")
{
    const SpatialGrid g(1e-3, 3);
    const std::string path = "density_roundtrip.csv";
    {
        std::ofstream out(path);
        out << "# 3x3 density\n";
        out << "0.5,0,0.1,0.05,0,0\n";
        out << "0.1,-0.05,0.3,0,0,0\n";
        out << "0,0,0,0,0.2,0\n";
    }
    const auto rho = load_density_csv(path, g);
    CHECK(rho.matrix()(0, 1) == Complex(0.1, 0.05));
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    std::remove(path.c_str());
    CHECK_THROWS(load_density_csv("no_such_file.csv", g));
}
