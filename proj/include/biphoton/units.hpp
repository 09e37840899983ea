#ifndef BIPHOTON_UNITS_HPP
#define BIPHOTON_UNITS_HPP

#include <complex>
#include <numbers>

namespace biphoton {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

inline constexpr double kNanometre = 1e-9;
inline constexpr double kMillimetre = 1e-3;
inline constexpr double kFemtosecond = 1e-15;

/// Angular frequency (rad/s) of light with the given vacuum wavelength (m).
constexpr double angular_frequency(double wavelength)
{
    return 2.0 * kPi * kSpeedOfLight / wavelength;
}

/// Angular-frequency width (rad/s) of a band of width `bandwidth` (m)
/// centred on `center` (m), to first order in bandwidth/center.
constexpr double angular_bandwidth(double center, double bandwidth)
{
    return 2.0 * kPi * kSpeedOfLight * bandwidth / (center * center);
}

} // namespace biphoton

#endif
