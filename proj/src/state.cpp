#include "biphoton/state.hpp"

#include <cmath>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_unit_frobenius(const Eigen::MatrixXcd& m, const char* what)
{
    const double n = m.squaredNorm();
    if (std::abs(n - 1.0) > 1e-9)
        throw InvalidState(std::string(what) + ": joint amplitude not normalized (norm^2 = " +
                           std::to_string(n) + ")");
}

} // namespace

TwoPhotonState::TwoPhotonState(SpatialSector spatial, SpectralSector spectral,
                               double pump_frequency, std::string label)
    : spatial_(std::move(spatial)), spectral_(std::move(spectral)),
      pump_frequency_(pump_frequency), label_(std::move(label))
{
    if (!(pump_frequency > 0.0) || !std::isfinite(pump_frequency))
        throw std::invalid_argument("TwoPhotonState: pump frequency must be positive");

    std::visit(overloaded{
                   [](const CorrelatedPump&) {},
                   [](const GeneralSpatial& g) {
                       const auto n = static_cast<Eigen::Index>(g.grid.size());
                       if (g.amplitude.rows() != n || g.amplitude.cols() != n)
                           throw std::invalid_argument("GeneralSpatial: amplitude size does not match grid");
                       check_unit_frobenius(g.amplitude, "GeneralSpatial");
                   },
               },
               spatial_);

    std::visit(overloaded{
                   [](AntiCorrelated& a) { a.density = normalize(a.density, a.grid); },
                   [](const GeneralSpectral& g) {
                       const auto n = static_cast<Eigen::Index>(g.grid.size());
                       if (g.amplitude.rows() != n || g.amplitude.cols() != n)
                           throw std::invalid_argument("GeneralSpectral: amplitude size does not match grid");
                       check_unit_frobenius(g.amplitude, "GeneralSpectral");
                   },
               },
               spectral_);
}

const SpatialGrid& TwoPhotonState::spatial_grid() const
{
    return std::visit(overloaded{
                          [](const CorrelatedPump& c) -> const SpatialGrid& { return c.pump.grid(); },
                          [](const GeneralSpatial& g) -> const SpatialGrid& { return g.grid; },
                      },
                      spatial_);
}

const FrequencyGrid& TwoPhotonState::frequency_grid() const
{
    return std::visit(overloaded{
                          [](const AntiCorrelated& a) -> const FrequencyGrid& { return a.grid; },
                          [](const GeneralSpectral& g) -> const FrequencyGrid& { return g.grid; },
                      },
                      spectral_);
}

TwoPhotonState TwoPhotonState::with_spatial(SpatialSector spatial) const
{
    return TwoPhotonState(std::move(spatial), spectral_, pump_frequency_, label_);
}

OnePhotonState reduce_to_one_photon(const TwoPhotonState& state)
{
    auto spatial = std::visit(
        overloaded{
            [](const CorrelatedPump& c) { return SpatialDensityOperator::incoherent(c.pump); },
            [](const GeneralSpatial& g) {
                // rho(x, x') = sum_x'' phi(x, x'') conj(phi(x', x''))
                Eigen::MatrixXcd rho = g.amplitude * g.amplitude.adjoint();
                rho = 0.5 * (rho + rho.adjoint()).eval();
                return SpatialDensityOperator::general(g.grid, std::move(rho));
            },
        },
        state.spatial());

    SpectralDensityOperator spectral = std::visit(
        overloaded{
            [](const AntiCorrelated& a) -> SpectralDensityOperator {
                DiscreteSpectrum d(a.density, a.grid);
                return DiagonalDensity{a.grid, d.masses()};
            },
            [](const GeneralSpectral& g) -> SpectralDensityOperator {
                Eigen::MatrixXcd rho = g.amplitude * g.amplitude.adjoint();
                rho = 0.5 * (rho + rho.adjoint()).eval();
                return GeneralDensity{g.grid, std::move(rho)};
            },
        },
        state.spectral());

    return {std::move(spatial), std::move(spectral), 0.5 * state.pump_frequency()};
}

DiscreteSpectrum one_photon_spectrum(const TwoPhotonState& state)
{
    return std::visit(overloaded{
                          [](const AntiCorrelated& a) { return DiscreteSpectrum(a.density, a.grid); },
                          [](const GeneralSpectral& g) {
                              const Eigen::VectorXd diag =
                                  (g.amplitude * g.amplitude.adjoint()).diagonal().real();
                              std::vector<double> masses(diag.data(), diag.data() + diag.size());
                              for (auto& m : masses)
                                  m = std::max(m, 0.0);
                              return DiscreteSpectrum(g.grid, std::move(masses));
                          },
                      },
                      state.spectral());
}

SpectralDensity filter_density(const SpdcParameters& params)
{
    if (!(params.filter_center > 0.0) || !(params.filter_bandwidth > 0.0))
        throw std::invalid_argument("filter centre and bandwidth must be positive");
    if (!(params.filter_bandwidth < params.filter_center))
        throw std::invalid_argument("filter bandwidth must be smaller than its centre wavelength");
    const double width = angular_bandwidth(params.filter_center, params.filter_bandwidth);
    switch (params.filter_shape) {
    case FilterShape::Rectangular:
        return SpectralDensity::rectangular(width);
    case FilterShape::Gaussian:
        // bandwidth read as FWHM of the transmission
        return SpectralDensity::gaussian(width / (2.0 * std::sqrt(2.0 * std::log(2.0))));
    }
    throw std::invalid_argument("unknown filter shape");
}

SpatialAmplitude pump_amplitude(const SpdcParameters& params)
{
    const SpatialGrid grid(params.spatial_half_width, params.spatial_points);
    if (params.tabulated_pump)
        return tabulated_profile(grid, *params.tabulated_pump);
    switch (params.pump_profile) {
    case PumpProfile::Gaussian:
        return gaussian_profile(grid, params.pump_waist);
    case PumpProfile::HermiteGauss1:
        return hermite_gauss1_profile(grid, params.pump_waist);
    case PumpProfile::ShiftedGaussian:
        return gaussian_profile(grid, params.pump_waist, params.pump_offset);
    }
    throw std::invalid_argument("unknown pump profile");
}

TwoPhotonState make_spdc_state(const SpdcParameters& params)
{
    if (!(params.pump_wavelength > 0.0))
        throw std::invalid_argument("pump wavelength must be positive");
    const auto density = filter_density(params);
    const auto grid = default_frequency_grid(density, params.spectral_points);
    return TwoPhotonState(CorrelatedPump{pump_amplitude(params)}, AntiCorrelated{density, grid},
                          angular_frequency(params.pump_wavelength), "spdc");
}

TwoPhotonState default_spdc_state()
{
    return make_spdc_state(SpdcParameters{});
}

} // namespace biphoton
