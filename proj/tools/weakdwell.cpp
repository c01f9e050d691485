// weakdwell — batch CLI over the weakdwell library.
//
//   weakdwell <experiment> --config <path> [--out <path>] [--format csv|json]
//             [--workers N] [--no-metadata]

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "weakdwell/run.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format;
    int workers = 1;
    bool no_metadata = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file (key = value lines)")
        ->required();
    cmd->add_option("--out", args.out_path, "output file (overrides config output_path)");
    cmd->add_option("--format", args.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", args.workers, "concurrent sweep workers")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-metadata", args.no_metadata, "omit metadata header/preamble");
}

int run_subcommand(weakdwell::Experiment experiment, const CommonArgs& args) {
    weakdwell::RunConfig config;
    config.experiment = experiment;
    config.params = weakdwell::ParamSet::parse_file(args.config_path);
    config.output_path = args.out_path.empty()
                             ? config.params.get_string_or("output_path", "")
                             : args.out_path;
    config.format = weakdwell::format_from_name(
        !args.format.empty() ? args.format : config.params.get_string_or("format", "csv"));
    weakdwell::RunOptions options;
    options.workers = args.workers;
    options.include_metadata = !args.no_metadata;
    weakdwell::run(config, options);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-value dwell times for a dissipative two-level system"};
    app.set_version_flag("--version", std::string("weakdwell ") + weakdwell::kToolVersion);
    app.require_subcommand(1);

    const std::pair<const char*, weakdwell::Experiment> experiments[] = {
        {"bath-sim", weakdwell::Experiment::bath_sim},
        {"pointer-sim", weakdwell::Experiment::pointer_sim},
        {"survival", weakdwell::Experiment::survival},
        {"dwell", weakdwell::Experiment::dwell},
        {"sweep", weakdwell::Experiment::sweep},
    };

    CommonArgs args;
    weakdwell::Experiment selected{};
    for (const auto& [name, experiment] : experiments) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common_options(cmd, args);
        cmd->callback([&selected, experiment = experiment] { selected = experiment; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage problems are config errors
    }

    try {
        return run_subcommand(selected, args);
    } catch (const std::exception& e) {
        std::cerr << "weakdwell: " << e.what() << "\n";
        return weakdwell::exit_code_for(e);
    }
}
