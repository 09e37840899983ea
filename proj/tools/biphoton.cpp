// biphoton: simulate, analyze and compare two-photon interferograms.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biphoton/app/commands.hpp"

int main(int argc, char** argv)
{
    using namespace biphoton::app;

    CLI::App app{"Two-photon interference in Mach-Zehnder interferometers"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::string engine;
    std::string out;
    auto* simulate = app.add_subcommand("simulate", "Scan the delay and write rates as CSV or JSON");
    simulate->add_option("--config", sim.config_path, "Run configuration (JSON)")->required();
    simulate->add_option("--engine", engine, "closed, oracle or both (overrides the config)");
    simulate->add_option("--out", out, "Output path, '-' for stdout (overrides the config)");

    std::string in_path;
    std::string window;
    auto* analyze = app.add_subcommand("analyze", "Visibilities, fringe periods and HOM width of a result file");
    analyze->add_option("--in", in_path, "Result file written by simulate")->required();
    analyze->add_option("--window", window, "Visibility window min:max in fs");

    std::string compare_config;
    auto* compare = app.add_subcommand("compare", "Run MZI and MZIM on the same state and compare");
    compare->add_option("--config", compare_config, "Run configuration (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    if (simulate->parsed()) {
        if (!engine.empty())
            sim.engine = engine;
        if (!out.empty())
            sim.out = out;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (analyze->parsed())
        return cmd_analyze(in_path, window.empty() ? std::nullopt : std::optional<std::string>(window), std::cout,
                           std::cerr);
    return cmd_compare(compare_config, std::cout, std::cerr);
}
