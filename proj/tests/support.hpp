#ifndef BIPHOTON_TESTS_SUPPORT_HPP
#define BIPHOTON_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "biphoton/state.hpp"

namespace biphoton::testing {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// Small-grid SPDC state for the dense cross-checks.
inline TwoPhotonState small_state(PumpProfile profile = PumpProfile::Gaussian, std::size_t n = 9,
                                  std::size_t m = 17, double offset = 0.0)
{
    SpdcParameters p;
    p.pump_profile = profile;
    p.pump_offset = offset;
    p.spatial_points = n;
    p.spectral_points = m;
    return make_spdc_state(p);
}

inline TwoPhotonState state_with(PumpProfile profile, double offset = 0.0)
{
    SpdcParameters p;
    p.pump_profile = profile;
    p.pump_offset = offset;
    return make_spdc_state(p);
}

/// Joint amplitude phi1(x) phi2(x') dx on the grid (unit Frobenius norm for unit phis).
inline Eigen::MatrixXcd product_amplitude(const SpatialAmplitude& a, const SpatialAmplitude& b)
{
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd m(n, n);
    const double dx = a.grid().spacing();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] * dx;
    return m;
}

inline std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

} // namespace biphoton::testing

#endif
