#include "biphoton/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include <Eigen/Dense>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> real_fft(std::vector<double> in)
{
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(in.size() / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> inverse_real_fft(std::vector<std::complex<double>> in, std::size_t n)
{
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    for (auto& v : out)
        v /= static_cast<double>(n);
    return out;
}

double uniform_step(const std::vector<double>& taus)
{
    if (taus.size() < 2)
        throw std::invalid_argument("need at least two delay samples");
    const double step = (taus.back() - taus.front()) / static_cast<double>(taus.size() - 1);
    if (!(step > 0.0))
        throw std::invalid_argument("delays must be increasing");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (std::abs(taus[i] - taus[i - 1] - step) > 1e-3 * step)
            throw std::invalid_argument("delays must be uniformly spaced");
    return step;
}

void check_lengths(const std::vector<double>& samples, const std::vector<double>& taus)
{
    if (samples.size() != taus.size())
        throw std::invalid_argument("samples and delays differ in length");
}

} // namespace

double visibility(const std::vector<double>& samples)
{
    if (samples.empty())
        throw EmptyOrNegative("visibility of an empty trace");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo < -1e-9)
        throw EmptyOrNegative("trace has negative samples");
    if (!(*hi > 0.0))
        throw EmptyOrNegative("trace has no signal");
    const double mn = std::max(*lo, 0.0);
    return std::clamp((*hi - mn) / (*hi + mn), 0.0, 1.0);
}

double fringe_period(const std::vector<double>& samples, const std::vector<double>& taus)
{
    check_lengths(samples, taus);
    if (samples.size() < 16)
        throw UnderResolved("fringe_period needs at least 16 samples");
    const double step = uniform_step(taus);
    const std::size_t n = samples.size();

    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
        windowed[i] = w * samples[i];
    }
    const auto spectrum = real_fft(std::move(windowed));

    const std::size_t first = std::max<std::size_t>(3, (n + 63) / 64);
    if (first + 1 >= spectrum.size())
        throw UnderResolved("trace too short to separate fringes from the envelope");
    std::size_t peak = first;
    for (std::size_t k = first; k < spectrum.size(); ++k)
        if (std::abs(spectrum[k]) > std::abs(spectrum[peak]))
            peak = k;

    const double dc = std::abs(spectrum[0]);
    if (!(2.0 * std::abs(spectrum[peak]) >= 0.02 * dc) || std::abs(spectrum[peak]) == 0.0)
        throw NoFringe("no fringe above 2% of the mean level");

    double offset = 0.0;
    if (peak > first && peak + 1 < spectrum.size()) {
        const double a = std::log(std::abs(spectrum[peak - 1]) + 1e-300);
        const double b = std::log(std::abs(spectrum[peak]));
        const double c = std::log(std::abs(spectrum[peak + 1]) + 1e-300);
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0)
            offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    const double bin = static_cast<double>(peak) + offset;
    const double samples_per_period = static_cast<double>(n) / bin;
    if (samples_per_period < 4.0)
        throw UnderResolved("fringe period is shorter than 4 samples");
    return samples_per_period * step;
}

std::vector<double> notch_lowpass(const std::vector<double>& samples, const std::vector<double>& taus,
                                  double cutoff)
{
    check_lengths(samples, taus);
    const double step = uniform_step(taus);
    const std::size_t n = samples.size();
    std::vector<double> extended(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        extended[i] = samples[i];
        extended[2 * n - 1 - i] = samples[i];
    }
    auto spectrum = real_fft(std::move(extended));
    const double resolution = 2.0 * kPi / (static_cast<double>(2 * n) * step);
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        if (static_cast<double>(k) * resolution > cutoff)
            spectrum[k] = 0.0;
    auto filtered = inverse_real_fft(std::move(spectrum), 2 * n);
    filtered.resize(n);
    return filtered;
}

double hom_dip_fwhm(const std::vector<double>& envelope, const std::vector<double>& taus, double baseline)
{
    check_lengths(envelope, taus);
    if (envelope.size() < 3)
        throw NoDip("trace too short");
    const auto lo = std::min_element(envelope.begin(), envelope.end());
    const std::size_t m = static_cast<std::size_t>(lo - envelope.begin());
    const double depth = baseline - *lo;
    if (depth < 1e-3)
        throw NoDip("dip depth below 1e-3");
    const double half = baseline - 0.5 * depth;

    auto crossing = [&](std::size_t inner, std::size_t outer) {
        const double t = (half - envelope[inner]) / (envelope[outer] - envelope[inner]);
        return taus[inner] + t * (taus[outer] - taus[inner]);
    };

    std::size_t i = m;
    while (i > 0 && envelope[i - 1] < half)
        --i;
    if (i == 0)
        throw NoDip("left half-depth crossing outside the trace");
    const double left = crossing(i, i - 1);

    std::size_t j = m;
    while (j + 1 < envelope.size() && envelope[j + 1] < half)
        ++j;
    if (j + 1 == envelope.size())
        throw NoDip("right half-depth crossing outside the trace");
    const double right = crossing(j, j + 1);
    return right - left;
}

SinusoidFit fit_sinusoid(const std::vector<double>& samples, const std::vector<double>& taus, double omega)
{
    check_lengths(samples, taus);
    if (samples.size() < 3)
        throw std::invalid_argument("fit_sinusoid needs at least three samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = taus[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(omega * t);
        design(i, 2) = std::sin(omega * t);
        rhs(i) = samples[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d x = design.colPivHouseholderQr().solve(rhs);
    // a cos + b sin = Re((a - i b) e^{i omega tau})
    return {x(0), Complex(x(1), -x(2))};
}

namespace {

std::optional<double> period_or_none(const Trace& t)
{
    try {
        return fringe_period(t.values, t.tau);
    } catch (const NoFringe&) {
        return std::nullopt;
    }
}

std::vector<double> restrict_to(const Trace& t, TimeWindow w)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < t.tau.size(); ++i)
        if (t.tau[i] >= w.min && t.tau[i] <= w.max)
            out.push_back(t.values[i]);
    return out;
}

} // namespace

VisibilityReport report(const Trace& singles, const Trace& coincidence, std::optional<TimeWindow> window)
{
    check_lengths(singles.values, singles.tau);
    check_lengths(coincidence.values, coincidence.tau);
    if (singles.tau.size() != coincidence.tau.size())
        throw GridMismatch("singles and coincidence scans differ in length");
    const double step = uniform_step(singles.tau);
    for (std::size_t i = 0; i < singles.tau.size(); ++i)
        if (std::abs(singles.tau[i] - coincidence.tau[i]) > 1e-9 * step)
            throw GridMismatch("singles and coincidence scans use different delays");

    VisibilityReport r{};
    r.fringe_period_singles = period_or_none(singles);
    r.fringe_period_coincidence = period_or_none(coincidence);

    if (window) {
        r.window = *window;
    } else {
        const double lo = singles.tau.front();
        const double hi = singles.tau.back();
        std::optional<double> period = r.fringe_period_singles;
        if (!period && r.fringe_period_coincidence)
            period = 2.0 * *r.fringe_period_coincidence;
        if (period) {
            const double centre = std::clamp(0.0, lo, hi);
            r.window = {std::max(lo, centre - 3.0 * *period), std::min(hi, centre + 3.0 * *period)};
        } else {
            r.window = {lo, hi};
        }
    }

    r.v1 = visibility(restrict_to(singles, r.window));
    r.v12 = visibility(restrict_to(coincidence, r.window));
    r.complementarity_sum = r.v1 * r.v1 + r.v12 * r.v12;

    if (r.fringe_period_coincidence) {
        const double omega_p = 2.0 * kPi / *r.fringe_period_coincidence;
        const auto envelope = notch_lowpass(coincidence.values, coincidence.tau, omega_p / 4.0);
        try {
            r.hom_fwhm = hom_dip_fwhm(envelope, coincidence.tau);
        } catch (const NoDip&) {
            r.hom_fwhm = std::nullopt;
        }
    }
    return r;
}

} // namespace biphoton
