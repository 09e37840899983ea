#include "biphoton/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "biphoton/app/config.hpp"
#include "biphoton/app/records.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/interferometer.hpp"
#include "biphoton/oracle.hpp"

namespace biphoton::app {

using nlohmann::ordered_json;

TimeWindow parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("window must look like min:max (fs)");
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    char* end = nullptr;
    const double lo = std::strtod(a.c_str(), &end);
    if (a.empty() || end != a.c_str() + a.size())
        throw std::invalid_argument("window minimum is not a number: '" + a + "'");
    const double hi = std::strtod(b.c_str(), &end);
    if (b.empty() || end != b.c_str() + b.size())
        throw std::invalid_argument("window maximum is not a number: '" + b + "'");
    if (!(hi > lo))
        throw std::invalid_argument("window maximum must exceed its minimum");
    return {lo * kFemtosecond, hi * kFemtosecond};
}

namespace {

Interferogram run_engine(const TwoPhotonState& state, const RunConfig& cfg, InterferometerKind kind,
                         Engine engine, const std::vector<double>& taus)
{
    if (engine == Engine::Oracle)
        return oracle::scan(state, pipeline_options(cfg, kind), taus);
    return scan(state, InterferometerConfig::of_kind(kind, state.pump_frequency()), taus);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_engine_diff(const Interferogram& a, const Interferogram& b)
{
    return std::max({max_abs_diff(a.singles_port1, b.singles_port1), max_abs_diff(a.singles_port2, b.singles_port2),
                     max_abs_diff(a.coincidence, b.coincidence)});
}

Trace singles_trace(const Interferogram& s) { return {s.tau, s.singles_port1}; }
Trace coincidence_trace(const Interferogram& s) { return {s.tau, s.coincidence}; }

/// Fit of the pump-frequency fringe in the coincidences, envelope removed.
SinusoidFit coincidence_fringe(const Interferogram& s, TimeWindow window)
{
    const auto slow = notch_lowpass(s.coincidence, s.tau, s.pump_frequency / 4.0);
    std::vector<double> taus;
    std::vector<double> fast;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.tau[i] >= window.min && s.tau[i] <= window.max) {
            taus.push_back(s.tau[i]);
            fast.push_back(s.coincidence[i] - slow[i]);
        }
    return fit_sinusoid(fast, taus, s.pump_frequency);
}

/// Runs `body`, mapping failures onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Error& e) {
        err << "engine failure: " << e.what() << '\n';
        return kExitEngineFailure;
    } catch (const std::exception& e) {
        err << "engine failure: " << e.what() << '\n';
        return kExitEngineFailure;
    }
}

} // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        RunConfig cfg = load_config(options.config_path);
        if (options.engine)
            cfg.engine = parse_engine(*options.engine);
        const std::string path = options.out ? *options.out : cfg.output.path;

        const TwoPhotonState state = build_state(cfg);
        const auto taus = scan_delays(cfg);
        const InterferometerKind kind = cfg.interferometer.kind;

        std::vector<Interferogram> scans;
        if (cfg.engine != Engine::Oracle)
            scans.push_back(run_engine(state, cfg, kind, Engine::Closed, taus));
        if (cfg.engine != Engine::Closed)
            scans.push_back(run_engine(state, cfg, kind, Engine::Oracle, taus));
        const auto records = to_records(scans);

        const bool to_stdout = path.empty() || path == "-";
        std::ofstream file;
        if (!to_stdout) {
            file.open(path, std::ios::binary);
            if (!file)
                throw ConfigError("output.path", 0, "cannot write '" + path + "'");
        }
        std::ostream& sink = to_stdout ? out : file;
        if (cfg.output.format == OutputFormat::Csv)
            write_csv(sink, records);
        else
            write_json(sink, records);
        sink.flush();
        if (!sink)
            throw std::runtime_error("write failed");

        if (cfg.engine == Engine::Both) {
            ordered_json summary;
            summary["max_abs_diff_singles"] = std::max(max_abs_diff(scans[0].singles_port1, scans[1].singles_port1),
                                                       max_abs_diff(scans[0].singles_port2, scans[1].singles_port2));
            summary["max_abs_diff_coincidence"] = max_abs_diff(scans[0].coincidence, scans[1].coincidence);
            summary["max_abs_diff"] = max_engine_diff(scans[0], scans[1]);
            (to_stdout ? err : out) << summary.dump() << '\n';
        }
        return kExitOk;
    });
}

int cmd_analyze(const std::string& path, const std::optional<std::string>& window, std::ostream& out,
                std::ostream& err)
{
    return guarded(err, [&] {
        std::optional<TimeWindow> w;
        if (window) {
            try {
                w = parse_window(*window);
            } catch (const std::invalid_argument& e) {
                throw SchemaError(std::string("--window: ") + e.what());
            }
        }
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw SchemaError("cannot open '" + path + "'");
        const auto records = read_records(in);
        const auto [singles, coincidence] = traces_for_first_engine(records);
        out << report_to_json(report(singles, coincidence, w)).dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_compare(const std::string& config_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig cfg = load_config(config_path);
        const TwoPhotonState state = build_state(cfg);
        const auto taus = scan_delays(cfg);
        const Engine primary = cfg.engine == Engine::Oracle ? Engine::Oracle : Engine::Closed;

        const auto mzi = run_engine(state, cfg, InterferometerKind::Mzi, primary, taus);
        const auto mzim = run_engine(state, cfg, InterferometerKind::Mzim, primary, taus);
        const auto mzi_report = report(singles_trace(mzi), coincidence_trace(mzi));
        const auto mzim_report = report(singles_trace(mzim), coincidence_trace(mzim));
        const double diff = max_abs_diff(mzi.coincidence, mzim.coincidence);

        const auto fit_mzi = coincidence_fringe(mzi, mzi_report.window);
        const auto fit_mzim = coincidence_fringe(mzim, mzi_report.window);

        ordered_json j;
        j["engine"] = to_string(primary);
        j["max_coincidence_diff"] = diff;
        j["coincidence_identical"] = diff <= 1e-6;
        j["mzi"] = report_to_json(mzi_report);
        j["mzim"] = report_to_json(mzim_report);
        j["coincidence_fringe"] = {
            {"phase_shift_rad", std::arg(fit_mzim.amplitude * std::conj(fit_mzi.amplitude))},
            {"amplitude_ratio", std::abs(fit_mzim.amplitude) / std::abs(fit_mzi.amplitude)},
        };
        if (cfg.engine == Engine::Both) {
            const auto mzi_o = run_engine(state, cfg, InterferometerKind::Mzi, Engine::Oracle, taus);
            const auto mzim_o = run_engine(state, cfg, InterferometerKind::Mzim, Engine::Oracle, taus);
            j["closed_oracle_max_diff"] = std::max(max_engine_diff(mzi, mzi_o), max_engine_diff(mzim, mzim_o));
        }
        out << j.dump(2) << '\n';
        return kExitOk;
    });
}

} // namespace biphoton::app
