// Command-line front end: bicontact --config run.ini --command verify

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bicontact/cli/config.hpp"
#include "bicontact/cli/run.hpp"

int main(int argc, char** argv) {
    using namespace bicontact::cli;
    CLI::App app{"Bi-contact structures, surgeries and their certificates"};
    std::string config_path;
    std::string command = "verify";
    std::optional<int> grid;
    std::optional<std::string> out_dir;
    RunOptions opt;
    app.add_option("--config", config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--command", command, "verify, surgery, slope, holonomy or report")
        ->check(CLI::IsMember({"verify", "surgery", "slope", "holonomy", "report"}));
    app.add_option("--grid", grid, "grid points per axis (overrides [grid] n)")->check(CLI::Range(2, 4096));
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--seed", opt.seed, "seed for random-point checks");
    app.add_flag("--quiet", opt.quiet, "only warnings and errors");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_error;
    }
    opt.grid = grid;
    opt.out_dir = out_dir;
    RunConfig config;
    try {
        config = parse_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return exit_error;
    }
    return run(command, config, opt, std::cout, std::cerr);
}
