#ifndef BIPHOTON_APP_CONFIG_HPP
#define BIPHOTON_APP_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "biphoton/interferometer.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/state.hpp"

namespace biphoton::app {

/// Invalid run configuration. `line` is 0 when it cannot be located.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::size_t line, const std::string& message);

    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

enum class Engine { Closed, Oracle, Both };
enum class OutputFormat { Csv, Json };

const char* to_string(Engine engine);
Engine parse_engine(const std::string& name); // throws ConfigError

enum class SpatialProfileType { Gaussian, Hg1, ShiftedGaussian, TabulatedFile };

struct PumpSection {
    double wavelength_nm = 405.0;
    SpatialProfileType profile = SpatialProfileType::Gaussian;
    double waist_mm = 1.0;
    double offset_mm = 0.0;
    std::string path; // tabulated_file: resolved against the config's directory
};

struct FilterSection {
    double center_nm = 810.0;
    double bandwidth_nm = 10.0;
    FilterShape shape = FilterShape::Rectangular;
};

struct InterferometerSection {
    InterferometerKind kind = InterferometerKind::Mzi;
    oracle::Arm delay_arm = oracle::Arm::B;
    oracle::Arm flip_arm = oracle::Arm::B;
};

struct ScanSection {
    double tau_start_fs = -200.0;
    double tau_stop_fs = 200.0;
    double tau_step_fs = 0.2;
};

struct GridSection {
    std::size_t spatial_points = kDefaultSpatialPoints;
    std::size_t spectral_points = kDefaultSpectralPoints;
    double spatial_halfwidth_mm = 3.0;
};

struct OutputSection {
    std::string path; // empty: standard output
    OutputFormat format = OutputFormat::Csv;
};

/// Every section and key is optional; missing values take the defaults above.
struct RunConfig {
    PumpSection pump;
    FilterSection filter;
    InterferometerSection interferometer;
    ScanSection scan;
    Engine engine = Engine::Closed;
    GridSection grids;
    OutputSection output;
};

/// Parses and validates a JSON document. Unknown keys are errors.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

SpdcParameters spdc_parameters(const RunConfig& cfg);
TwoPhotonState build_state(const RunConfig& cfg);
/// Scan delays in seconds.
std::vector<double> scan_delays(const RunConfig& cfg);
oracle::PipelineOptions pipeline_options(const RunConfig& cfg, InterferometerKind kind);

} // namespace biphoton::app

#endif
