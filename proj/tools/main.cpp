#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "drsim/cli.hpp"
#include "drsim/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"drsim: peak-load reduction simulator for customer engagement plans"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;

    CLI::App* run = app.add_subcommand("run", "evaluate one scenario and write reports");
    run->add_option("--config", config_path, "scenario file")->required();
    run->add_option("--out-dir", out_dir, "output directory (default: out)");
    run->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate the scenario's sweep grid");
    sweep->add_option("--config", config_path, "scenario file")->required();
    sweep->add_option("--out-dir", out_dir, "output directory (default: out)");
    sweep->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });
    sweep->add_option("--workers", workers, "parallel evaluation workers (default: 1)");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("--config", config_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    drsim::RunOverrides overrides;
    if (seed_set) overrides.seed = seed;

    try {
        if (run->parsed()) return drsim::cmd_run(config_path, out_dir, overrides);
        if (sweep->parsed()) return drsim::cmd_sweep(config_path, out_dir, overrides, workers);
        if (validate->parsed()) return drsim::cmd_validate(config_path);
    } catch (const drsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
