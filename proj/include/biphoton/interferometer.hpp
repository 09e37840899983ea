#ifndef BIPHOTON_INTERFEROMETER_HPP
#define BIPHOTON_INTERFEROMETER_HPP

#include <optional>
#include <string>
#include <vector>

#include "biphoton/spatial.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/state.hpp"

namespace biphoton {

enum class InterferometerKind { Mzi, Mzim };

const char* to_string(InterferometerKind kind);

struct MirrorCounts {
    int arm_a;
    int arm_b;
};

/**
 * Interferometer geometry. Reflection parity decides the kind: equal parity in
 * both arms is an MZI, unequal parity (one mirror removed) is an MZIM.
 */
class InterferometerConfig {
public:
    InterferometerConfig(InterferometerKind kind, double pump_frequency, MirrorCounts mirrors);

    /// Three mirrors per arm.
    static InterferometerConfig mzi(double pump_frequency);
    /// Three mirrors in arm a, two in arm b.
    static InterferometerConfig mzim(double pump_frequency);
    static InterferometerConfig of_kind(InterferometerKind kind, double pump_frequency);

    InterferometerKind kind() const { return kind_; }
    double pump_frequency() const { return pump_frequency_; }
    MirrorCounts mirror_counts() const { return mirrors_; }

private:
    InterferometerKind kind_;
    double pump_frequency_;
    MirrorCounts mirrors_;
};

/// Sampled delay scan. Rates are normalized to a unit incoherent background.
struct Interferogram {
    std::vector<double> tau; // s
    std::vector<double> singles_port1;
    std::vector<double> singles_port2;
    std::vector<double> coincidence;
    InterferometerKind kind = InterferometerKind::Mzi;
    double pump_frequency = 0.0;
    std::string state_label;
    std::string engine;

    std::size_t size() const { return tau.size(); }
};

/// Delay samples start, start+step, ... up to stop (inclusive within 1e-9 step).
/// Throws UnderSampled unless 0 < step <= 0.2 * 2 pi / pump_frequency.
std::vector<double> delay_samples(double start, double stop, double step, double pump_frequency);

/**
 * Closed-form singles and coincidence rates for one state in one interferometer.
 * Construction precomputes the spectral quadrature and the spatial overlaps
 * (alpha from the reduced one-photon state, beta from the pump).
 */
class ClosedFormModel {
public:
    ClosedFormModel(const TwoPhotonState& state, const InterferometerConfig& cfg);

    const InterferometerConfig& config() const { return cfg_; }
    const DiscreteSpectrum& spectrum() const { return spectrum_; }
    ParityOverlap alpha() const { return alpha_; }
    ParityOverlap beta() const { return beta_; }

    /// Singles at output port 1 (the port dark at tau = 0 in an MZI).
    double singles(double tau) const;
    /// Coincidence rate G2(tau).
    double coincidence(double tau) const;

private:
    InterferometerConfig cfg_;
    DiscreteSpectrum spectrum_;
    bool anti_correlated_;
    ParityOverlap alpha_;
    ParityOverlap beta_;
};

/// 1 - cos(omega_p tau)/2 - E2(tau)/2. Throws AsymmetricSpectrum for uneven densities.
double g2_mzi(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau);

/// 1 - cos(omega_p tau / 2) E1(tau), independent of the spatial sector.
double intensity_mzi(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau);

/// 1 - |alpha| cos(omega_p tau / 2 - arg alpha) E1(tau), alpha = flip overlap of
/// the reduced spatial state.
double intensity_mzim(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau);

/// Coincidences behind the flipped arm for pumps of definite parity (beta = +1 or -1):
/// 1 - beta [cos(omega_p tau) + E2(tau)] / 2. Throws NonParityPump when |beta| < 1 - 1e-9.
double g2_mzim(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau);

/// Closed-form scan, evaluated in parallel and assembled in delay order.
Interferogram scan(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau_start,
                   double tau_stop, double tau_step);

Interferogram scan(const TwoPhotonState& state, const InterferometerConfig& cfg,
                   const std::vector<double>& taus);

} // namespace biphoton

#endif
