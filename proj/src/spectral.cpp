#include "biphoton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biphoton/errors.hpp"

namespace biphoton {

FrequencyGrid::FrequencyGrid(double half_width, std::size_t point_count)
    : half_width_(half_width), point_count_(point_count)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("FrequencyGrid: half_width must be positive");
    if (point_count < 3 || point_count % 2 == 0)
        throw std::invalid_argument("FrequencyGrid: point_count must be odd and >= 3");
    spacing_ = 2.0 * half_width / static_cast<double>(point_count - 1);
}

std::vector<double> FrequencyGrid::nodes() const
{
    std::vector<double> out(point_count_);
    for (std::size_t k = 0; k < point_count_; ++k)
        out[k] = node(k);
    return out;
}

std::vector<double> FrequencyGrid::trapezoid_weights() const
{
    std::vector<double> w(point_count_, spacing_);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

SpectralDensity::SpectralDensity(Shape shape, double scale)
    : shape_(std::move(shape)), scale_(scale)
{
    if (!(scale >= 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("SpectralDensity: scale must be finite and nonnegative");
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangular>) {
                if (!(s.full_width > 0.0))
                    throw std::invalid_argument("Rectangular: full_width must be positive");
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                if (!(s.rms_width > 0.0))
                    throw std::invalid_argument("Gaussian: rms_width must be positive");
            } else {
                if (s.points.size() < 2)
                    throw std::invalid_argument("Tabulated: need at least two points");
                for (std::size_t i = 0; i < s.points.size(); ++i) {
                    if (s.points[i].second < 0.0)
                        throw std::invalid_argument("Tabulated: density must be nonnegative");
                    if (i > 0 && !(s.points[i].first > s.points[i - 1].first))
                        throw std::invalid_argument("Tabulated: abscissae must be strictly increasing");
                }
            }
        },
        shape_);
}

SpectralDensity SpectralDensity::rectangular(double full_width)
{
    return SpectralDensity(Rectangular{full_width}, 1.0);
}

SpectralDensity SpectralDensity::gaussian(double rms_width)
{
    return SpectralDensity(Gaussian{rms_width}, 1.0);
}

SpectralDensity SpectralDensity::tabulated(std::vector<std::pair<double, double>> points)
{
    return SpectralDensity(Tabulated{std::move(points)}, 1.0);
}

double SpectralDensity::operator()(double omega) const
{
    const double raw = std::visit(
        [omega](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangular>) {
                const double edge = 0.5 * s.full_width;
                const double d = std::abs(omega) - edge;
                const double height = 1.0 / s.full_width;
                // discontinuity sampled at its midpoint value
                if (std::abs(d) <= 1e-9 * s.full_width)
                    return 0.5 * height;
                return d < 0.0 ? height : 0.0;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const double u = omega / s.rms_width;
                return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * kPi) * s.rms_width);
            } else {
                const auto& p = s.points;
                if (omega < p.front().first || omega > p.back().first)
                    return 0.0;
                auto hi = std::upper_bound(p.begin(), p.end(), omega,
                                           [](double w, const auto& q) { return w < q.first; });
                if (hi == p.end())
                    return p.back().second;
                auto lo = hi - 1;
                const double t = (omega - lo->first) / (hi->first - lo->first);
                return lo->second + t * (hi->second - lo->second);
            }
        },
        shape_);
    return scale_ * raw;
}

double SpectralDensity::support_half_width() const
{
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rectangular>)
                return 0.5 * s.full_width;
            else if constexpr (std::is_same_v<T, Gaussian>)
                return 6.0 * s.rms_width;
            else
                return std::max(std::abs(s.points.front().first), std::abs(s.points.back().first));
        },
        shape_);
}

std::vector<double> SpectralDensity::sample(const FrequencyGrid& grid) const
{
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        out[k] = (*this)(grid.node(k));
    return out;
}

namespace {

bool symmetric_samples(const std::vector<double>& v)
{
    const double peak = *std::max_element(v.begin(), v.end());
    const double tol = 1e-12 * std::max(peak, 1e-300);
    for (std::size_t k = 0; k < v.size() / 2; ++k)
        if (std::abs(v[k] - v[v.size() - 1 - k]) > tol)
            return false;
    return true;
}

} // namespace

bool SpectralDensity::is_even_on(const FrequencyGrid& grid) const
{
    return symmetric_samples(sample(grid));
}

FrequencyGrid default_frequency_grid(const SpectralDensity& sd, std::size_t points)
{
    // Gaussians already report 6 sigma as their support.
    const bool gaussian = std::holds_alternative<Gaussian>(sd.shape());
    const double half = gaussian ? sd.support_half_width() : 4.0 * sd.support_half_width();
    return FrequencyGrid(half, points);
}

double integrate(const SpectralDensity& sd, const FrequencyGrid& grid)
{
    const auto v = sd.sample(grid);
    const auto w = grid.trapezoid_weights();
    return std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
}

SpectralDensity normalize(const SpectralDensity& sd, const FrequencyGrid& grid)
{
    const double total = integrate(sd, grid);
    if (!(total >= 1e-300))
        throw ZeroDensity("spectral density integrates to zero on the grid");
    return SpectralDensity(sd.shape(), sd.scale() / total);
}

DiscreteSpectrum::DiscreteSpectrum(const SpectralDensity& sd, const FrequencyGrid& grid)
    : grid_(grid), masses_(sd.sample(grid))
{
    even_ = symmetric_samples(masses_);
    const auto w = grid.trapezoid_weights();
    for (std::size_t k = 0; k < masses_.size(); ++k)
        masses_[k] *= w[k];
}

DiscreteSpectrum::DiscreteSpectrum(FrequencyGrid grid, std::vector<double> masses)
    : grid_(grid), masses_(std::move(masses))
{
    if (masses_.size() != grid_.size())
        throw std::invalid_argument("DiscreteSpectrum: mass count does not match grid");
    for (double m : masses_)
        if (m < 0.0)
            throw std::invalid_argument("DiscreteSpectrum: masses must be nonnegative");
    even_ = symmetric_samples(masses_);
}

double DiscreteSpectrum::total() const
{
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

double DiscreteSpectrum::first_order(double tau) const
{
    // Phasor recurrence over uniform nodes, re-seeded every block to bound drift.
    constexpr std::size_t kBlock = 64;
    const std::size_t n = masses_.size();
    const Complex step = std::polar(1.0, grid_.spacing() * tau);
    double acc = 0.0;
    for (std::size_t start = 0; start < n; start += kBlock) {
        const std::size_t stop = std::min(n, start + kBlock);
        Complex z = std::polar(1.0, grid_.node(start) * tau);
        double partial = 0.0;
        for (std::size_t k = start; k < stop; ++k) {
            partial += masses_[k] * z.real();
            z *= step;
        }
        acc += partial;
    }
    return acc;
}

double envelope_first_order(const SpectralDensity& sd, const FrequencyGrid& grid, double tau)
{
    return DiscreteSpectrum(sd, grid).first_order(tau);
}

double envelope_second_order(const SpectralDensity& sd, const FrequencyGrid& grid, double tau)
{
    return DiscreteSpectrum(sd, grid).second_order(tau);
}

double envelope_first_zero(const DiscreteSpectrum& spectrum, double tau_limit)
{
    // Bracket with steps well below the shortest feature the grid supports.
    double support = 0.0;
    for (std::size_t k = 0; k < spectrum.masses().size(); ++k)
        if (spectrum.masses()[k] > 0.0)
            support = std::max(support, std::abs(spectrum.grid().node(k)));
    if (support == 0.0)
        throw Error("envelope_first_zero: spectrum has no weight away from Omega = 0");
    const double step = kPi / (32.0 * support);

    double lo = 0.0;
    double f_lo = spectrum.first_order(lo);
    for (double hi = step; hi <= tau_limit; hi += step) {
        const double f_hi = spectrum.first_order(hi);
        if ((f_lo > 0.0) != (f_hi > 0.0) || f_hi == 0.0) {
            double a = lo, b = hi, fa = f_lo;
            for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = spectrum.first_order(m);
                if ((fa > 0.0) == (fm > 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw Error("envelope_first_zero: no sign change before tau_limit");
}

} // namespace biphoton
