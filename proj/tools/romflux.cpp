#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "romflux/pipeline.hpp"

namespace {

struct Cli {
    std::string config;
    std::string closure = "lstm";
    std::string mode = "hybrid";
    int modes = 0;
    std::uint64_t seed = 1;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume reduced-order modeling pipeline for the turbulent "
                 "lid-driven cavity"};
    app.require_subcommand(1);
    Cli cli;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cli.config, "Case configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        return sub;
    };

    CLI::App* fom = add_common(app.add_subcommand(
        "fom-run", "Run the full-order solver and record snapshots"));
    CLI::App* pod = add_common(app.add_subcommand(
        "pod", "Build the modal bases from recorded snapshots"));
    CLI::App* offline = add_common(app.add_subcommand(
        "rom-offline", "Assemble and store the reduced operators"));
    CLI::App* train = add_common(app.add_subcommand(
        "closure-train", "Train the eddy-viscosity closure network"));
    train->add_option("--closure", cli.closure, "Network kind: mlp or lstm");
    train->add_option("--seed", cli.seed, "Training seed");
    CLI::App* online = add_common(app.add_subcommand(
        "rom-online", "Advance the reduced model over the recorded horizon"));
    online->add_option("--mode", cli.mode, "hybrid, oracle-d, or frozen-nu");
    online->add_option("--closure", cli.closure, "Network kind for hybrid runs");
    online->add_option("--modes", cli.modes, "Truncate to this many modes");
    CLI::App* evaluate = add_common(app.add_subcommand(
        "evaluate", "Compare a stored reduced trajectory against the snapshots"));
    evaluate->add_option("--mode", cli.mode, "Trajectory to evaluate");
    CLI::App* plots = add_common(app.add_subcommand(
        "emit-plots", "Write the modes-variation error tables (oracle-d sweep)"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        const romflux::CaseConfig cfg = romflux::load_case_config(cli.config);
        namespace pl = romflux::pipeline;
        if (fom->parsed()) pl::cmd_fom_run(cfg);
        else if (pod->parsed()) pl::cmd_pod(cfg);
        else if (offline->parsed()) pl::cmd_rom_offline(cfg);
        else if (train->parsed()) pl::cmd_closure_train(cfg, cli.closure, cli.seed);
        else if (online->parsed())
            pl::cmd_rom_online(cfg, pl::parse_online_mode(cli.mode), cli.closure,
                               cli.modes);
        else if (evaluate->parsed())
            pl::cmd_evaluate(cfg, pl::parse_online_mode(cli.mode));
        else if (plots->parsed()) pl::cmd_emit_plots(cfg);
    } catch (const std::exception& e) {
        std::cerr << "romflux: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
