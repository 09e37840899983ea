#include "biphoton/app/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "biphoton/errors.hpp"

namespace biphoton::app {

using nlohmann::json;

ConfigError::ConfigError(std::string field, std::size_t line, const std::string& message)
    : std::runtime_error(message), field_(std::move(field)), line_(line)
{
}

const char* to_string(Engine engine)
{
    switch (engine) {
    case Engine::Closed:
        return "closed";
    case Engine::Oracle:
        return "oracle";
    case Engine::Both:
        return "both";
    }
    return "?";
}

Engine parse_engine(const std::string& name)
{
    if (name == "closed")
        return Engine::Closed;
    if (name == "oracle")
        return Engine::Oracle;
    if (name == "both")
        return Engine::Both;
    throw ConfigError("engine", 0, "engine must be closed, oracle or both, got '" + name + "'");
}

namespace {

std::size_t line_at(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    /// Line of `"section"` ... `"key"`, or 0.
    std::size_t locate(const std::string& section, const std::string& key) const
    {
        std::size_t from = 0;
        if (!section.empty()) {
            from = text_.find("\"" + section + "\"");
            if (from == std::string::npos)
                return 0;
        }
        if (key.empty())
            return line_at(text_, from);
        const auto at = text_.find("\"" + key + "\"", from);
        return at == std::string::npos ? 0 : line_at(text_, at);
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const
    {
        const std::string field = section.empty() ? key : (key.empty() ? section : section + "." + key);
        const std::size_t line = locate(section, key);
        std::ostringstream msg;
        msg << "config";
        if (line > 0)
            msg << ":" << line;
        msg << ": field '" << field << "': " << what;
        throw ConfigError(field, line, msg.str());
    }

    const json& object(const json& parent, const std::string& section, const std::string& key,
                       const std::set<std::string>& allowed) const
    {
        const json& v = key.empty() ? parent : parent.at(key);
        const std::string where = section.empty() ? key : section;
        if (!v.is_object())
            fail(section, key, "expected an object");
        for (const auto& [name, _] : v.items())
            if (!allowed.count(name))
                fail(where, name, "unknown key");
        return v;
    }

    double number(const json& obj, const std::string& section, const std::string& key, double fallback) const
    {
        if (!obj.contains(key))
            return fallback;
        const json& v = obj.at(key);
        if (!v.is_number())
            fail(section, key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail(section, key, "expected a finite number");
        return d;
    }

    std::size_t count(const json& obj, const std::string& section, const std::string& key,
                      std::size_t fallback) const
    {
        if (!obj.contains(key))
            return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(section, key, "expected a nonnegative integer");
        return static_cast<std::size_t>(v.get<long long>());
    }

    std::string string(const json& obj, const std::string& section, const std::string& key,
                       const std::string& fallback) const
    {
        if (!obj.contains(key))
            return fallback;
        const json& v = obj.at(key);
        if (!v.is_string())
            fail(section, key, "expected a string");
        return v.get<std::string>();
    }

private:
    const std::string& text_;
};

oracle::Arm parse_arm(const Reader& r, const std::string& section, const std::string& key,
                      const std::string& name)
{
    if (name == "a")
        return oracle::Arm::A;
    if (name == "b")
        return oracle::Arm::B;
    r.fail(section, key, "expected \"a\" or \"b\", got '" + name + "'");
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t line = line_at(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("", line, "config:" + std::to_string(line) + ": malformed JSON: " + e.what());
    }

    const Reader r(text);
    RunConfig cfg;
    r.object(doc, "", "", {"pump", "filter", "interferometer", "scan", "engine", "grids", "output"});

    if (doc.contains("pump")) {
        const json& p = r.object(doc, "", "pump", {"wavelength_nm", "spatial_profile"});
        cfg.pump.wavelength_nm = r.number(p, "pump", "wavelength_nm", cfg.pump.wavelength_nm);
        if (p.contains("spatial_profile")) {
            const json& s = r.object(p, "spatial_profile", "spatial_profile",
                                     {"type", "waist_mm", "offset_mm", "path"});
            const std::string sec = "spatial_profile";
            const std::string type = r.string(s, sec, "type", "gaussian");
            if (type == "gaussian")
                cfg.pump.profile = SpatialProfileType::Gaussian;
            else if (type == "hg1")
                cfg.pump.profile = SpatialProfileType::Hg1;
            else if (type == "shifted_gaussian")
                cfg.pump.profile = SpatialProfileType::ShiftedGaussian;
            else if (type == "tabulated_file")
                cfg.pump.profile = SpatialProfileType::TabulatedFile;
            else
                r.fail(sec, "type", "expected gaussian, hg1, shifted_gaussian or tabulated_file");
            cfg.pump.waist_mm = r.number(s, sec, "waist_mm", cfg.pump.waist_mm);
            cfg.pump.offset_mm = r.number(s, sec, "offset_mm", cfg.pump.offset_mm);
            cfg.pump.path = r.string(s, sec, "path", "");
            if (cfg.pump.profile == SpatialProfileType::TabulatedFile) {
                if (cfg.pump.path.empty())
                    r.fail(sec, "path", "tabulated_file needs a path");
                std::filesystem::path path(cfg.pump.path);
                if (path.is_relative())
                    path = std::filesystem::path(base_dir) / path;
                cfg.pump.path = path.string();
            }
            if (!(cfg.pump.waist_mm > 0.0))
                r.fail(sec, "waist_mm", "must be positive");
        }
        if (!(cfg.pump.wavelength_nm > 0.0))
            r.fail("pump", "wavelength_nm", "must be positive");
    }

    if (doc.contains("filter")) {
        const json& f = r.object(doc, "", "filter", {"center_nm", "bandwidth_nm", "shape"});
        cfg.filter.center_nm = r.number(f, "filter", "center_nm", cfg.filter.center_nm);
        cfg.filter.bandwidth_nm = r.number(f, "filter", "bandwidth_nm", cfg.filter.bandwidth_nm);
        const std::string shape = r.string(f, "filter", "shape", "rectangular");
        if (shape == "rectangular")
            cfg.filter.shape = FilterShape::Rectangular;
        else if (shape == "gaussian")
            cfg.filter.shape = FilterShape::Gaussian;
        else
            r.fail("filter", "shape", "expected rectangular or gaussian");
    }
    if (!(cfg.filter.center_nm > 0.0))
        r.fail("filter", "center_nm", "must be positive");
    if (!(cfg.filter.bandwidth_nm > 0.0))
        r.fail("filter", "bandwidth_nm", "must be positive");
    if (!(cfg.filter.bandwidth_nm < cfg.filter.center_nm))
        r.fail("filter", "bandwidth_nm", "must be smaller than center_nm");

    if (doc.contains("interferometer")) {
        const json& i = r.object(doc, "", "interferometer", {"kind", "delay_arm", "flip_arm"});
        const std::string kind = r.string(i, "interferometer", "kind", "mzi");
        if (kind == "mzi")
            cfg.interferometer.kind = InterferometerKind::Mzi;
        else if (kind == "mzim")
            cfg.interferometer.kind = InterferometerKind::Mzim;
        else
            r.fail("interferometer", "kind", "expected mzi or mzim");
        cfg.interferometer.delay_arm =
            parse_arm(r, "interferometer", "delay_arm", r.string(i, "interferometer", "delay_arm", "b"));
        cfg.interferometer.flip_arm =
            parse_arm(r, "interferometer", "flip_arm", r.string(i, "interferometer", "flip_arm", "b"));
    }

    if (doc.contains("scan")) {
        const json& s = r.object(doc, "", "scan", {"tau_start_fs", "tau_stop_fs", "tau_step_fs"});
        cfg.scan.tau_start_fs = r.number(s, "scan", "tau_start_fs", cfg.scan.tau_start_fs);
        cfg.scan.tau_stop_fs = r.number(s, "scan", "tau_stop_fs", cfg.scan.tau_stop_fs);
        cfg.scan.tau_step_fs = r.number(s, "scan", "tau_step_fs", cfg.scan.tau_step_fs);
    }
    if (cfg.scan.tau_stop_fs < cfg.scan.tau_start_fs)
        r.fail("scan", "tau_stop_fs", "must not be below tau_start_fs");
    const double pump_period_fs = cfg.pump.wavelength_nm * kNanometre / kSpeedOfLight / kFemtosecond;
    if (!(cfg.scan.tau_step_fs > 0.0) || cfg.scan.tau_step_fs > 0.2 * pump_period_fs * (1.0 + 1e-12)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "must be in (0, %.4g] fs to resolve the pump-period fringes",
                      0.2 * pump_period_fs);
        r.fail("scan", "tau_step_fs", buf);
    }

    if (doc.contains("engine")) {
        if (!doc.at("engine").is_string())
            r.fail("", "engine", "expected a string");
        try {
            cfg.engine = parse_engine(doc.at("engine").get<std::string>());
        } catch (const ConfigError& e) {
            r.fail("", "engine", e.what());
        }
    }

    if (doc.contains("grids")) {
        const json& g = r.object(doc, "", "grids", {"spatial_points", "spectral_points", "spatial_halfwidth_mm"});
        cfg.grids.spatial_points = r.count(g, "grids", "spatial_points", cfg.grids.spatial_points);
        cfg.grids.spectral_points = r.count(g, "grids", "spectral_points", cfg.grids.spectral_points);
        cfg.grids.spatial_halfwidth_mm = r.number(g, "grids", "spatial_halfwidth_mm", cfg.grids.spatial_halfwidth_mm);
    }
    if (cfg.grids.spatial_points < 3 || cfg.grids.spatial_points % 2 == 0)
        r.fail("grids", "spatial_points", "must be odd and at least 3");
    if (cfg.grids.spectral_points < 3 || cfg.grids.spectral_points % 2 == 0)
        r.fail("grids", "spectral_points", "must be odd and at least 3");
    if (!(cfg.grids.spatial_halfwidth_mm > 0.0))
        r.fail("grids", "spatial_halfwidth_mm", "must be positive");

    if (doc.contains("output")) {
        const json& o = r.object(doc, "", "output", {"path", "format"});
        cfg.output.path = r.string(o, "output", "path", "");
        const std::string format = r.string(o, "output", "format", "csv");
        if (format == "csv")
            cfg.output.format = OutputFormat::Csv;
        else if (format == "json")
            cfg.output.format = OutputFormat::Json;
        else
            r.fail("output", "format", "expected csv or json");
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", 0, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

namespace {

/// x_mm,re[,im] per line; '#' comments and blank lines skipped.
std::vector<std::pair<double, Complex>> load_profile_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("spatial_profile.path", 0, "cannot open pump profile '" + path + "'");
    std::vector<std::pair<double, Complex>> samples;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw ConfigError("spatial_profile.path", 0,
                                  path + ":" + std::to_string(number) + ": not a number: '" + cell + "'");
            fields.push_back(v);
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ConfigError("spatial_profile.path", 0,
                              path + ":" + std::to_string(number) + ": expected x_mm,re[,im]");
        samples.emplace_back(fields[0] * kMillimetre, Complex(fields[1], fields.size() == 3 ? fields[2] : 0.0));
    }
    if (samples.size() < 2)
        throw ConfigError("spatial_profile.path", 0, path + ": needs at least two samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw ConfigError("spatial_profile.path", 0, path + ": positions must be increasing");
    return samples;
}

} // namespace

SpdcParameters spdc_parameters(const RunConfig& cfg)
{
    SpdcParameters p;
    p.pump_wavelength = cfg.pump.wavelength_nm * kNanometre;
    p.filter_center = cfg.filter.center_nm * kNanometre;
    p.filter_bandwidth = cfg.filter.bandwidth_nm * kNanometre;
    p.filter_shape = cfg.filter.shape;
    p.pump_waist = cfg.pump.waist_mm * kMillimetre;
    p.pump_offset = cfg.pump.offset_mm * kMillimetre;
    p.spatial_half_width = cfg.grids.spatial_halfwidth_mm * kMillimetre;
    p.spatial_points = cfg.grids.spatial_points;
    p.spectral_points = cfg.grids.spectral_points;
    switch (cfg.pump.profile) {
    case SpatialProfileType::Gaussian:
        p.pump_profile = PumpProfile::Gaussian;
        p.pump_offset = 0.0;
        break;
    case SpatialProfileType::Hg1:
        p.pump_profile = PumpProfile::HermiteGauss1;
        break;
    case SpatialProfileType::ShiftedGaussian:
        p.pump_profile = PumpProfile::ShiftedGaussian;
        break;
    case SpatialProfileType::TabulatedFile:
        p.tabulated_pump = load_profile_csv(cfg.pump.path);
        break;
    }
    return p;
}

TwoPhotonState build_state(const RunConfig& cfg)
{
    return make_spdc_state(spdc_parameters(cfg));
}

std::vector<double> scan_delays(const RunConfig& cfg)
{
    return delay_samples(cfg.scan.tau_start_fs * kFemtosecond, cfg.scan.tau_stop_fs * kFemtosecond,
                         cfg.scan.tau_step_fs * kFemtosecond,
                         angular_frequency(cfg.pump.wavelength_nm * kNanometre));
}

oracle::PipelineOptions pipeline_options(const RunConfig& cfg, InterferometerKind kind)
{
    oracle::PipelineOptions o;
    o.kind = kind;
    o.delay_arm = cfg.interferometer.delay_arm;
    o.flip_arm = cfg.interferometer.flip_arm;
    return o;
}

} // namespace biphoton::app
