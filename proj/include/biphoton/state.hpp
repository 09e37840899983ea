#ifndef BIPHOTON_STATE_HPP
#define BIPHOTON_STATE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/spatial.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

/// phi(x, x') = phi(x) delta(x - x'): both photons born at the same transverse point.
struct CorrelatedPump {
    SpatialAmplitude pump;
};

/// Arbitrary two-argument amplitude, stored as phi(x_i, x_j) dx with unit
/// Frobenius norm. Row index is photon 1, column index photon 2.
struct GeneralSpatial {
    SpatialGrid grid;
    Eigen::MatrixXcd amplitude;
};

/// psi(Omega, Omega') = psi(Omega) delta(Omega + Omega') with real, nonnegative
/// psi = sqrt(density). The density is normalized on `grid` at construction.
struct AntiCorrelated {
    SpectralDensity density;
    FrequencyGrid grid;
};

/// Arbitrary two-argument spectral amplitude psi(Omega_k, Omega_l) sqrt(w_k w_l),
/// unit Frobenius norm.
struct GeneralSpectral {
    FrequencyGrid grid;
    Eigen::MatrixXcd amplitude;
};

using SpatialSector = std::variant<CorrelatedPump, GeneralSpatial>;
using SpectralSector = std::variant<AntiCorrelated, GeneralSpectral>;

/**
 * Biphoton state separable in its spatial and spectral degrees of freedom.
 * Both sectors are normalized (within 1e-9) once constructed; the separable
 * product is the only form the type can express.
 */
class TwoPhotonState {
public:
    TwoPhotonState(SpatialSector spatial, SpectralSector spectral, double pump_frequency,
                   std::string label = {});

    const SpatialSector& spatial() const { return spatial_; }
    const SpectralSector& spectral() const { return spectral_; }
    double pump_frequency() const { return pump_frequency_; }
    const std::string& label() const { return label_; }

    const SpatialGrid& spatial_grid() const;
    const FrequencyGrid& frequency_grid() const;

    /// Same state with a different spatial sector.
    TwoPhotonState with_spatial(SpatialSector spatial) const;

private:
    SpatialSector spatial_;
    SpectralSector spectral_;
    double pump_frequency_;
    std::string label_;
};

struct DiagonalDensity {
    FrequencyGrid grid;
    std::vector<double> masses; // |psi(Omega_k)|^2 w_k, sums to one
};

struct GeneralDensity {
    FrequencyGrid grid;
    Eigen::MatrixXcd matrix; // unit trace, Hermitian
};

using SpectralDensityOperator = std::variant<DiagonalDensity, GeneralDensity>;

/// Reduced state of either photon: rho_x (x) rho_Omega around omega_p / 2.
struct OnePhotonState {
    SpatialDensityOperator spatial;
    SpectralDensityOperator spectral;
    double central_frequency;
};

OnePhotonState reduce_to_one_photon(const TwoPhotonState& state);

/// Spectral masses of the reduced state when it is diagonal, as a quadrature-ready spectrum.
DiscreteSpectrum one_photon_spectrum(const TwoPhotonState& state);

enum class FilterShape { Rectangular, Gaussian };

enum class PumpProfile { Gaussian, HermiteGauss1, ShiftedGaussian };

/// Apparatus-level description of an SPDC source behind an interference filter.
struct SpdcParameters {
    double pump_wavelength = 405.0 * kNanometre;
    double filter_center = 810.0 * kNanometre;
    double filter_bandwidth = 10.0 * kNanometre; // full width (FWHM for Gaussian filters)
    FilterShape filter_shape = FilterShape::Rectangular;
    PumpProfile pump_profile = PumpProfile::Gaussian;
    double pump_waist = kDefaultPumpWaist;
    double pump_offset = 0.0; // ShiftedGaussian only
    double spatial_half_width = kDefaultSpatialHalfWidth;
    std::size_t spatial_points = kDefaultSpatialPoints;
    std::size_t spectral_points = kDefaultSpectralPoints;
    /// Overrides pump_profile when set.
    std::optional<std::vector<std::pair<double, Complex>>> tabulated_pump;
};

SpectralDensity filter_density(const SpdcParameters& params);
SpatialAmplitude pump_amplitude(const SpdcParameters& params);
TwoPhotonState make_spdc_state(const SpdcParameters& params);

/// 405 nm pump, 810 nm / 10 nm rectangular filter, 1 mm even Gaussian pump.
TwoPhotonState default_spdc_state();

} // namespace biphoton

#endif
