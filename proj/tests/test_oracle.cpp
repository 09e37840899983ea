#include <doctest.h>

#include <cmath>
#include <random>

#include "biphoton/errors.hpp"
#include "biphoton/interferometer.hpp"
#include "biphoton/oracle.hpp"
#include "support.hpp"

using namespace biphoton;
using namespace biphoton::oracle;
using biphoton::testing::linspace;
using biphoton::testing::product_amplitude;
using biphoton::testing::small_state;

namespace {

std::vector<Complex> random_vector(std::mt19937& rng, std::size_t n)
{
    std::normal_distribution<double> d;
    std::vector<Complex> v(n);
    for (auto& z : v)
        z = Complex(d(rng), d(rng));
    return v;
}

Eigen::MatrixXcd reversal(std::size_t n)
{
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1 - i)) = 1.0;
    return p;
}

Eigen::MatrixXcd diag(const std::vector<Complex>& d)
{
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = d[i];
    return v.asDiagonal();
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

PipelineOptions options(InterferometerKind kind)
{
    PipelineOptions o;
    o.kind = kind;
    return o;
}

TwoPhotonState entangled_small_state()
{
    const SpatialGrid g(3e-3, 9);
    const auto hg0 = gaussian_profile(g, 1e-3);
    const auto hg1 = hermite_gauss1_profile(g, 1e-3);
    const Eigen::MatrixXcd a = (product_amplitude(hg0, hg1) + product_amplitude(hg1, hg0)) / std::sqrt(2.0);
    return small_state().with_spatial(GeneralSpatial{g, a});
}

} // namespace

TEST_CASE("factor algebra matches dense matrices")
{
    std::mt19937 rng(11);
    const std::size_t n = 7;
    const auto make = [&](int layout) {
        if (layout == 0)
            return Factor::diagonal(random_vector(rng, n));
        if (layout == 1)
            return Factor::anti_diagonal(random_vector(rng, n));
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(7, 7);
        return Factor::full(m);
    };
    for (int la = 0; la < 3; ++la) {
        const Factor a = make(la);
        const auto d = random_vector(rng, n);
        Factor f = a;
        f.scale_first(d);
        CHECK(max_diff(f.dense(), diag(d) * a.dense()) <= 1e-12);
        f = a;
        f.scale_second(d);
        CHECK(max_diff(f.dense(), a.dense() * diag(d)) <= 1e-12);
        f = a;
        f.flip_first();
        CHECK(max_diff(f.dense(), reversal(n) * a.dense()) == 0.0);
        f = a;
        f.flip_second();
        CHECK(max_diff(f.dense(), a.dense() * reversal(n)) == 0.0);
        CHECK(max_diff(a.transposed().dense(), a.dense().transpose()) == 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(a.at(i, j) == a.dense()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        for (int lb = 0; lb < 3; ++lb) {
            const Factor b = make(lb);
            const Complex expected = (a.dense().conjugate().cwiseProduct(b.dense())).sum();
            CHECK(std::abs(a.inner(b) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("initial state")
{
    const auto s = default_spdc_state();
    const auto init = build_initial_state(s);
    CHECK(init.branch_count() == 1);
    CHECK(std::abs(init.norm() - 1.0) <= 1e-9);
    CHECK(init.exchange_asymmetry() <= 1e-12);
    CHECK(init.branches()[0].path1 == Arm::A);
    CHECK(init.branches()[0].path2 == Arm::A);

    const auto general = build_initial_state(entangled_small_state());
    CHECK(general.branches()[0].spatial.layout() == Factor::Layout::Full);
    CHECK(std::abs(general.norm() - 1.0) <= 1e-9);
}

TEST_CASE("branch sum and dense tensor agree element by element")
{
    for (const auto& state : {small_state(), small_state(PumpProfile::HermiteGauss1),
                              small_state(PumpProfile::ShiftedGaussian, 9, 17, 1e-3), entangled_small_state()}) {
        auto branch = build_initial_state(state);
        auto dense = DenseTensorState::from_state(state);
        CHECK(max_diff(to_dense(branch).amplitude(), dense.amplitude()) <= 1e-12);
        CHECK(std::abs(dense.norm() - 1.0) <= 1e-12);

        for (auto kind : {InterferometerKind::Mzi, InterferometerKind::Mzim}) {
            for (double tau : {0.0, 0.4e-15, 37e-15}) {
                auto b = branch;
                auto d = dense;
                for (const auto& e : make_pipeline(options(kind), tau)) {
                    b = apply_element(std::move(b), e);
                    d.apply(e);
                    CHECK(std::abs(b.norm() - 1.0) <= 1e-12);
                    CHECK(std::abs(d.norm() - 1.0) <= 1e-12);
                    CHECK(b.exchange_asymmetry() <= 1e-12);
                    CHECK(d.exchange_asymmetry() <= 1e-12);
                    CHECK(b.branch_count() <= 16);
                    CHECK(max_diff(to_dense(b).amplitude(), d.amplitude()) <= 1e-12);
                }
                CHECK(std::abs(coincidence_rate(b) - d.coincidence_rate()) <= 1e-12);
                CHECK(std::abs(singles_rate(b, Port::C) - d.singles_rate(Port::C)) <= 1e-12);
                CHECK(std::abs(singles_rate(b, Port::D) - d.singles_rate(Port::D)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("element identities")
{
    const auto state = small_state();
    const auto init = build_initial_state(state);

    SUBCASE("two beam splitters route everything to one path")
    {
        auto s = apply_element(apply_element(init, BeamSplitter{}), BeamSplitter{});
        CHECK(s.block_norm(Arm::B, Arm::B) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(s.norm() - 1.0) <= 1e-12);
        const auto before = to_dense(init).amplitude();
        const auto after = to_dense(s).amplitude();
        const Eigen::Index h = before.rows() / 2;
        CHECK(max_diff(after.block(h, h, h, h), -before.block(0, 0, h, h)) <= 1e-12);
    }
    SUBCASE("delay on an empty arm changes nothing")
    {
        const auto s = apply_element(init, Delay{Arm::B, 123e-15});
        REQUIRE(s.branch_count() == init.branch_count());
        CHECK(s.branches()[0].spectral == init.branches()[0].spectral);
        CHECK(s.branches()[0].weight == init.branches()[0].weight);
    }
    SUBCASE("flip of an even pump changes nothing")
    {
        const auto s = apply_element(init, SpatialFlip{Arm::A});
        CHECK(max_diff(to_dense(s).amplitude(), to_dense(init).amplitude()) <= 1e-12);
    }
    SUBCASE("pipeline errors")
    {
        CHECK_THROWS_AS(coincidence_rate(init), IncompletePipeline);
        CHECK_THROWS_AS(singles_rate(init, Port::C), IncompletePipeline);
        const auto done = run_pipeline(init, make_pipeline(options(InterferometerKind::Mzi), 0.0));
        CHECK_THROWS_AS(apply_element(done, BeamSplitter{}), InvalidElement);
        auto d = DenseTensorState::from_state(state);
        CHECK_THROWS_AS(d.coincidence_rate(), IncompletePipeline);
        d.apply(RelabelOutputs{});
        CHECK_THROWS_AS(d.apply(Delay{Arm::A, 0.0}), InvalidElement);
    }
    SUBCASE("dense budget")
    {
        const auto big = small_state(PumpProfile::Gaussian, 65, 129);
        CHECK_THROWS_AS(DenseTensorState::from_state(big), BudgetExceeded);
        CHECK_THROWS_AS(to_dense(build_initial_state(big)), BudgetExceeded);
    }
}

TEST_CASE("oracle reproduces the closed forms")
{
    SpdcParameters p;
    p.spectral_points = 4097;
    const auto state = make_spdc_state(p);
    const auto taus = linspace(-300e-15, 300e-15, 200);
    for (auto kind : {InterferometerKind::Mzi, InterferometerKind::Mzim}) {
        const auto closed = scan(state, InterferometerConfig::of_kind(kind, state.pump_frequency()), taus);
        const auto brute = oracle::scan(state, options(kind), taus);
        CHECK(brute.engine == "oracle");
        for (std::size_t i = 0; i < taus.size(); ++i) {
            CHECK(std::abs(closed.singles_port1[i] - brute.singles_port1[i]) <= 1e-6);
            CHECK(std::abs(closed.singles_port2[i] - brute.singles_port2[i]) <= 1e-6);
            CHECK(std::abs(closed.coincidence[i] - brute.coincidence[i]) <= 1e-6);
        }
    }
    const auto at_zero = run_pipeline(build_initial_state(state), make_pipeline(options(InterferometerKind::Mzi), 0.0));
    CHECK(coincidence_rate(at_zero) <= 1e-6);
}

TEST_CASE("outputs do not depend on arm assignment or splitter convention")
{
    for (const auto& state : {small_state(PumpProfile::Gaussian, 33, 257), small_state(PumpProfile::HermiteGauss1, 33, 257),
                              small_state(PumpProfile::ShiftedGaussian, 33, 257, 0.8e-3)}) {
        const auto init = build_initial_state(state);
        for (double tau : {0.0, 0.3e-15, 25e-15}) {
            const auto ref = run_pipeline(init, make_pipeline(options(InterferometerKind::Mzim), tau));
            for (Arm delay : {Arm::A, Arm::B})
                for (Arm flip : {Arm::A, Arm::B})
                    for (auto conv : {BeamSplitterConvention::Symmetric, BeamSplitterConvention::SymmetricConjugate}) {
                        PipelineOptions o = options(InterferometerKind::Mzim);
                        o.delay_arm = delay;
                        o.flip_arm = flip;
                        o.convention = conv;
                        const auto out = run_pipeline(init, make_pipeline(o, tau));
                        CHECK(std::abs(coincidence_rate(out) - coincidence_rate(ref)) <= 1e-9);
                        CHECK(std::abs(singles_rate(out, Port::C) - singles_rate(ref, Port::C)) <= 1e-9);
                    }
        }
    }
}

TEST_CASE("pump parity in the MZIM")
{
    SpdcParameters p;
    p.spectral_points = 1025;
    p.pump_profile = PumpProfile::HermiteGauss1;
    const auto odd = make_spdc_state(p);
    const auto mzi = InterferometerConfig::mzi(odd.pump_frequency());
    const auto mzim = InterferometerConfig::mzim(odd.pump_frequency());
    const auto init = build_initial_state(odd);
    for (double tau : {0.0, 0.2e-15, 0.45e-15, 60e-15}) {
        const auto out = run_pipeline(init, make_pipeline(options(InterferometerKind::Mzim), tau));
        CHECK(std::abs(coincidence_rate(out) - g2_mzim(odd, mzim, tau)) <= 1e-9);
        // the sinusoid and the HOM term both change sign
        CHECK(coincidence_rate(out) == doctest::Approx(2.0 - g2_mzi(odd, mzi, tau)).epsilon(1e-9));
    }

    // arbitrary pump: the two-photon terms scale with beta (direct sum)
    p.pump_profile = PumpProfile::ShiftedGaussian;
    p.pump_offset = 1e-3;
    const auto shifted = make_spdc_state(p);
    const auto& phi = std::get<CorrelatedPump>(shifted.spatial()).pump;
    double beta = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        beta += (std::conj(phi[i]) * phi[phi.size() - 1 - i]).real() * phi.grid().spacing();
    const auto sinit = build_initial_state(shifted);
    for (double tau : {0.0, 0.2e-15, 30e-15}) {
        const double g = coincidence_rate(run_pipeline(sinit, make_pipeline(options(InterferometerKind::Mzim), tau)));
        const double even_curve = g2_mzi(shifted, mzi, tau);
        CHECK(g == doctest::Approx((1.0 - beta) + beta * even_curve).epsilon(1e-9));
        CHECK(g > std::min(1.0, even_curve));
        CHECK(g < std::max(1.0, even_curve));
    }
}

TEST_CASE("mixture simulator")
{
    const auto opts = options(InterferometerKind::Mzim);

    SUBCASE("rank-one reduced state matches the pure-state run")
    {
        const SpatialGrid g(3e-3, 33);
        const auto phi = gaussian_profile(g, 1e-3);
        const auto state = small_state(PumpProfile::Gaussian, 33, 513).with_spatial(GeneralSpatial{g, product_amplitude(phi, phi)});
        const MixtureSimulator sim(state, opts);
        CHECK(sim.spatial_modes().size() == 1);
        const auto init = build_initial_state(state);
        const auto model = ClosedFormModel(state, InterferometerConfig::mzim(state.pump_frequency()));
        for (double tau : {0.0, 0.7e-15, 20e-15}) {
            const auto r = sim.at(tau);
            const auto out = run_pipeline(init, make_pipeline(opts, tau));
            CHECK(std::abs(r.singles_port1 - singles_rate(out, Port::C)) <= 1e-12);
            CHECK(std::abs(r.singles_port1 - model.singles(tau)) <= 1e-9);
            CHECK(r.coincidence == coincidence_rate(out));
        }
    }
    SUBCASE("even/odd mixture has no singles fringe")
    {
        const auto state = entangled_small_state();
        const MixtureSimulator sim(state, opts);
        CHECK(sim.spatial_modes().size() == 2);
        const auto init = build_initial_state(state);
        for (double tau : {0.0, 0.7e-15, 1.35e-15}) {
            const auto r = sim.at(tau);
            CHECK(std::abs(r.singles_port1 - 1.0) <= 1e-12);
            CHECK(std::abs(r.singles_port1 - singles_rate(run_pipeline(init, make_pipeline(opts, tau)), Port::C)) <= 1e-12);
        }
    }
    SUBCASE("SPDC state: flat singles, coincidences of the pure state")
    {
        SpdcParameters p;
        p.spectral_points = 1025;
        const auto state = make_spdc_state(p);
        const MixtureSimulator sim(state, opts);
        const auto init = build_initial_state(state);
        for (double tau : {0.0, 1.35e-15, 2.7e-15, 100e-15}) {
            const auto r = simulate_mixture(state, opts, tau);
            const auto out = run_pipeline(init, make_pipeline(opts, tau));
            CHECK(std::abs(r.singles_port1 - 1.0) <= 0.02);
            CHECK(std::abs(r.singles_port1 - singles_rate(out, Port::C)) <= 1e-9);
            CHECK(r.singles_port1 + r.singles_port2 == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(r.coincidence == coincidence_rate(out));
            CHECK(std::abs(sim.at(tau).singles_port1 - r.singles_port1) <= 1e-15);
        }
    }
}
