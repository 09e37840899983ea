#ifndef BIPHOTON_APP_COMMANDS_HPP
#define BIPHOTON_APP_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "biphoton/analysis.hpp"

namespace biphoton::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitEngineFailure = 2;

struct SimulateOptions {
    std::string config_path;
    std::optional<std::string> engine; // overrides the config
    std::optional<std::string> out;    // overrides output.path; "-" is stdout
};

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// `window` in fs as "min:max".
int cmd_analyze(const std::string& path, const std::optional<std::string>& window, std::ostream& out,
                std::ostream& err);

int cmd_compare(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Parses "min:max" in fs into seconds. Throws std::invalid_argument.
TimeWindow parse_window(const std::string& text);

} // namespace biphoton::app

#endif
