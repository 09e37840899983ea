#include "biphoton/interferometer.hpp"

#include <cmath>

#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"

namespace biphoton {

const char* to_string(InterferometerKind kind)
{
    return kind == InterferometerKind::Mzi ? "mzi" : "mzim";
}

InterferometerConfig::InterferometerConfig(InterferometerKind kind, double pump_frequency,
                                           MirrorCounts mirrors)
    : kind_(kind), pump_frequency_(pump_frequency), mirrors_(mirrors)
{
    if (!(pump_frequency > 0.0))
        throw std::invalid_argument("InterferometerConfig: pump frequency must be positive");
    if (mirrors.arm_a < 0 || mirrors.arm_b < 0)
        throw std::invalid_argument("InterferometerConfig: mirror counts must be nonnegative");
    const bool same_parity = (mirrors.arm_a % 2) == (mirrors.arm_b % 2);
    if (same_parity != (kind == InterferometerKind::Mzi))
        throw std::invalid_argument(
            "InterferometerConfig: MZI needs equal mirror parity in both arms, MZIM unequal");
}

InterferometerConfig InterferometerConfig::mzi(double pump_frequency)
{
    return {InterferometerKind::Mzi, pump_frequency, {3, 3}};
}

InterferometerConfig InterferometerConfig::mzim(double pump_frequency)
{
    return {InterferometerKind::Mzim, pump_frequency, {3, 2}};
}

InterferometerConfig InterferometerConfig::of_kind(InterferometerKind kind, double pump_frequency)
{
    return kind == InterferometerKind::Mzi ? mzi(pump_frequency) : mzim(pump_frequency);
}

std::vector<double> delay_samples(double start, double stop, double step, double pump_frequency)
{
    if (!(stop >= start))
        throw std::invalid_argument("scan: tau_stop must not precede tau_start");
    const double limit = 0.2 * 2.0 * kPi / pump_frequency;
    if (!(step > 0.0) || step > limit * (1.0 + 1e-12))
        throw UnderSampled("scan: tau_step must lie in (0, " + std::to_string(limit) +
                           " s] to resolve pump-frequency fringes");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> taus(count);
    for (std::size_t i = 0; i < count; ++i)
        taus[i] = start + static_cast<double>(i) * step;
    return taus;
}

namespace {

ParityOverlap pump_parity(const TwoPhotonState& state)
{
    if (const auto* c = std::get_if<CorrelatedPump>(&state.spatial()))
        return pump_parity_overlap(c->pump);
    // <A, (F x F) A> for a general joint amplitude
    const auto& a = std::get<GeneralSpatial>(state.spatial()).amplitude;
    const auto n = a.rows();
    Complex s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            s += std::conj(a(i, j)) * a(n - 1 - i, n - 1 - j);
    return ParityOverlap::from_value(s);
}

} // namespace

ClosedFormModel::ClosedFormModel(const TwoPhotonState& state, const InterferometerConfig& cfg)
    : cfg_(cfg), spectrum_(one_photon_spectrum(state)),
      anti_correlated_(std::holds_alternative<AntiCorrelated>(state.spectral())),
      alpha_{1.0, 0.0}, beta_{1.0, 0.0}
{
    if (cfg.kind() == InterferometerKind::Mzim) {
        alpha_ = flip_overlap(reduce_to_one_photon(state).spatial);
        beta_ = pump_parity(state);
    }
}

double ClosedFormModel::singles(double tau) const
{
    const double half_pump = 0.5 * cfg_.pump_frequency() * tau;
    const double e1 = spectrum_.first_order(tau);
    if (cfg_.kind() == InterferometerKind::Mzi)
        return 1.0 - std::cos(half_pump) * e1;
    return 1.0 - alpha_.magnitude * std::cos(half_pump - alpha_.phase) * e1;
}

double ClosedFormModel::coincidence(double tau) const
{
    if (!anti_correlated_)
        throw InvalidState("closed-form coincidences need an anti-correlated spectrum");
    if (!spectrum_.is_even())
        throw AsymmetricSpectrum("closed-form coincidences need an even spectral density");
    const double fringe = std::cos(cfg_.pump_frequency() * tau);
    const double dip = spectrum_.second_order(tau);
    if (cfg_.kind() == InterferometerKind::Mzi)
        return 1.0 - 0.5 * fringe - 0.5 * dip;

    if (beta_.magnitude < 1.0 - 1e-9)
        throw NonParityPump("pump is neither even nor odd (|beta| = " +
                            std::to_string(beta_.magnitude) + "); use the mode oracle");
    // definite parity: beta is +1 or -1 and multiplies both two-photon terms
    const double sign = std::cos(beta_.phase) >= 0.0 ? 1.0 : -1.0;
    return 1.0 - sign * (0.5 * fringe + 0.5 * dip);
}

namespace {

void require_kind(const InterferometerConfig& cfg, InterferometerKind kind, const char* op)
{
    if (cfg.kind() != kind)
        throw WrongInterferometer(std::string(op) + " needs an " + to_string(kind) + " configuration");
}

} // namespace

double g2_mzi(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau)
{
    require_kind(cfg, InterferometerKind::Mzi, "g2_mzi");
    return ClosedFormModel(state, cfg).coincidence(tau);
}

double intensity_mzi(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau)
{
    require_kind(cfg, InterferometerKind::Mzi, "intensity_mzi");
    return ClosedFormModel(state, cfg).singles(tau);
}

double intensity_mzim(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau)
{
    require_kind(cfg, InterferometerKind::Mzim, "intensity_mzim");
    return ClosedFormModel(state, cfg).singles(tau);
}

double g2_mzim(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau)
{
    require_kind(cfg, InterferometerKind::Mzim, "g2_mzim");
    return ClosedFormModel(state, cfg).coincidence(tau);
}

Interferogram scan(const TwoPhotonState& state, const InterferometerConfig& cfg,
                   const std::vector<double>& taus)
{
    const ClosedFormModel model(state, cfg);
    Interferogram out;
    out.tau = taus;
    out.singles_port1.resize(taus.size());
    out.singles_port2.resize(taus.size());
    out.coincidence.resize(taus.size());
    out.kind = cfg.kind();
    out.pump_frequency = cfg.pump_frequency();
    out.state_label = state.label();
    out.engine = "closed";
    parallel_for(taus.size(), [&](std::size_t i) {
        const double s = model.singles(taus[i]);
        out.singles_port1[i] = s;
        out.singles_port2[i] = 2.0 - s;
        out.coincidence[i] = model.coincidence(taus[i]);
    });
    return out;
}

Interferogram scan(const TwoPhotonState& state, const InterferometerConfig& cfg, double tau_start,
                   double tau_stop, double tau_step)
{
    return scan(state, cfg, delay_samples(tau_start, tau_stop, tau_step, cfg.pump_frequency()));
}

} // namespace biphoton
