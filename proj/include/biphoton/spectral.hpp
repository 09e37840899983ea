#ifndef BIPHOTON_SPECTRAL_HPP
#define BIPHOTON_SPECTRAL_HPP

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "biphoton/units.hpp"

namespace biphoton {

inline constexpr std::size_t kDefaultSpectralPoints = 32769;

/**
 * Uniform grid of frequency deviations Omega (rad/s) from the degenerate
 * frequency omega_p/2. The grid is symmetric, contains Omega = 0, and node k
 * maps to -Omega_k at node size()-1-k.
 */
class FrequencyGrid {
public:
    FrequencyGrid(double half_width, std::size_t point_count);

    double half_width() const { return half_width_; }
    std::size_t size() const { return point_count_; }
    double spacing() const { return spacing_; }
    std::size_t center() const { return point_count_ / 2; }
    std::size_t mirror(std::size_t k) const { return point_count_ - 1 - k; }

    double node(std::size_t k) const
    {
        return (static_cast<double>(k) - static_cast<double>(center())) * spacing_;
    }

    std::vector<double> nodes() const;

    /// Composite trapezoid weights (spacing, halved at both ends).
    std::vector<double> trapezoid_weights() const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    double half_width_;
    std::size_t point_count_;
    double spacing_;
};

struct Rectangular {
    double full_width; // rad/s
};

struct Gaussian {
    double rms_width; // rad/s
};

struct Tabulated {
    std::vector<std::pair<double, double>> points; // (Omega rad/s, density s/rad), ascending
};

/**
 * One-photon spectral density |psi(Omega)|^2 centred on Omega = 0.
 *
 * The shape carries the functional form; `scale` multiplies it. The named
 * constructors give unit-integral shapes in the continuum; `normalize` makes
 * the integral exactly one under the grid's quadrature.
 */
class SpectralDensity {
public:
    using Shape = std::variant<Rectangular, Gaussian, Tabulated>;

    explicit SpectralDensity(Shape shape, double scale = 1.0);

    static SpectralDensity rectangular(double full_width);
    static SpectralDensity gaussian(double rms_width);
    static SpectralDensity tabulated(std::vector<std::pair<double, double>> points);

    double operator()(double omega) const;

    const Shape& shape() const { return shape_; }
    double scale() const { return scale_; }

    /// Largest |Omega| at which the density can be nonzero (6 sigma for Gaussians).
    double support_half_width() const;

    /// Density values at every grid node.
    std::vector<double> sample(const FrequencyGrid& grid) const;

    /// True iff |psi(-Omega)|^2 = |psi(Omega)|^2 on every node, within 1e-12
    /// relative to the peak density.
    bool is_even_on(const FrequencyGrid& grid) const;

private:
    Shape shape_;
    double scale_;
};

/// Working grid for a density: half-width 4x the support half-width
/// (6 sigma for Gaussians), `points` nodes.
FrequencyGrid default_frequency_grid(const SpectralDensity& sd,
                                     std::size_t points = kDefaultSpectralPoints);

/// Trapezoid integral of the density over the grid.
double integrate(const SpectralDensity& sd, const FrequencyGrid& grid);

/// Rescales `sd` so that its trapezoid integral over `grid` is one.
/// Throws ZeroDensity when the integral is below 1e-300.
SpectralDensity normalize(const SpectralDensity& sd, const FrequencyGrid& grid);

/**
 * Density frozen onto a grid as quadrature masses m_k = w_k |psi(Omega_k)|^2.
 * All envelope integrals go through this one quadrature.
 */
class DiscreteSpectrum {
public:
    DiscreteSpectrum(const SpectralDensity& sd, const FrequencyGrid& grid);
    DiscreteSpectrum(FrequencyGrid grid, std::vector<double> masses);

    const FrequencyGrid& grid() const { return grid_; }
    const std::vector<double>& masses() const { return masses_; }
    bool is_even() const { return even_; }
    double total() const;

    /// E1(tau) = sum_k m_k cos(Omega_k tau).
    double first_order(double tau) const;
    /// E2(tau) = sum_k m_k cos(2 Omega_k tau), evaluated as E1(2 tau).
    double second_order(double tau) const { return first_order(2.0 * tau); }

private:
    FrequencyGrid grid_;
    std::vector<double> masses_;
    bool even_;
};

double envelope_first_order(const SpectralDensity& sd, const FrequencyGrid& grid, double tau);
double envelope_second_order(const SpectralDensity& sd, const FrequencyGrid& grid, double tau);

/// Smallest tau > 0 where E1 changes sign, located to ~1e-12 relative.
/// Throws Error if no sign change occurs before `tau_limit`.
double envelope_first_zero(const DiscreteSpectrum& spectrum, double tau_limit);

} // namespace biphoton

#endif
