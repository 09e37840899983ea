#ifndef BIPHOTON_ANALYSIS_HPP
#define BIPHOTON_ANALYSIS_HPP

// Interferogram analysis: visibilities, fringe periods, HOM-dip width.
// All functions are pure; times are in seconds.

#include <optional>
#include <vector>

#include "biphoton/units.hpp"

namespace biphoton {

/// (max - min) / (max + min), clamped to [0, 1].
/// Throws EmptyOrNegative for empty input, samples below -1e-9 or max <= 0.
double visibility(const std::vector<double>& samples);

/**
 * Period of the strongest fringe in a uniformly sampled trace: Hann window,
 * real FFT, log-parabolic refinement around the peak bin. Only periods shorter
 * than 64 samples are searched, so slow envelopes are ignored.
 *
 * Throws UnderResolved when the period is under 4 samples (or fewer than 16
 * samples are given), NoFringe when the fringe amplitude is below 2% of the
 * mean level.
 */
double fringe_period(const std::vector<double>& samples, const std::vector<double>& taus);

/// Drops every Fourier component above `cutoff` (rad/s). The trace is mirror
/// extended first; a fringe that does not fit the window still rings near the ends.
std::vector<double> notch_lowpass(const std::vector<double>& samples, const std::vector<double>& taus,
                                  double cutoff);

/**
 * Full width at half depth of a dip below `baseline`, crossings located by
 * linear interpolation walking outward from the minimum.
 * Throws NoDip if the depth is under 1e-3 or a crossing lies outside the trace.
 */
double hom_dip_fwhm(const std::vector<double>& envelope, const std::vector<double>& taus,
                    double baseline = 1.0);

/// Least-squares fit samples ~ offset + Re(amplitude exp(i omega tau)).
struct SinusoidFit {
    double offset;
    Complex amplitude;
};

SinusoidFit fit_sinusoid(const std::vector<double>& samples, const std::vector<double>& taus,
                         double omega);

struct Trace {
    std::vector<double> tau;
    std::vector<double> values;
};

struct TimeWindow {
    double min;
    double max;
};

struct VisibilityReport {
    double v1;
    double v12;
    double complementarity_sum; // v1^2 + v12^2, diagnostic only
    TimeWindow window;
    std::optional<double> fringe_period_singles;
    std::optional<double> fringe_period_coincidence;
    std::optional<double> hom_fwhm;
};

/**
 * Visibilities over `window` (default: three singles periods either side of
 * tau = 0), fringe periods over the whole scan, and the HOM width of the
 * coincidence envelope after a notch at a quarter of the coincidence fringe
 * frequency. Missing fringes or dips are reported as absent.
 * Throws GridMismatch when the traces are not sampled on the same delays.
 */
VisibilityReport report(const Trace& singles, const Trace& coincidence,
                        std::optional<TimeWindow> window = std::nullopt);

} // namespace biphoton

#endif
