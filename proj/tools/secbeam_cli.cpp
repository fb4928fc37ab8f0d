// Experiment runner for the secure IRS beamforming simulator. Subcommands:
//   run <config>       execute the configured experiment, write CSV
//   trace <config>     per-iteration convergence trace, write CSV
//   validate <config>  parse and echo the effective configuration
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secbeam/experiment.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int realizations = 0;
    int jobs = -1;
    std::string out;
    std::string algorithms;
    bool full = false;
};

void add_common(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("config", ov.config_path, "experiment configuration file")->required();
    cmd->add_option("--seed", ov.seed, "override the master seed")
        ->each([&](const std::string&) { ov.seed_set = true; });
    cmd->add_option("--realizations", ov.realizations, "override the realization count");
    cmd->add_option("--jobs", ov.jobs, "parallel realization bound (0 = hardware default)");
    cmd->add_option("--out", ov.out, "override the output CSV path");
    cmd->add_option("--algorithms", ov.algorithms,
                    "comma list from two_tiers,single_loop,ref1,ref2");
    cmd->add_flag("--full", ov.full, "use the full-scale realization count");
}

secbeam::experiment::Config load(const Overrides& ov) {
    auto cfg = secbeam::experiment::parse_config_file(ov.config_path);
    if (ov.seed_set) cfg.scenario.seed = ov.seed;
    if (ov.realizations > 0) cfg.experiment.realizations = ov.realizations;
    if (ov.jobs >= 0) cfg.experiment.jobs = ov.jobs;
    if (!ov.out.empty()) cfg.experiment.output_path = ov.out;
    if (!ov.algorithms.empty()) {
        cfg.experiment.algorithms.clear();
        std::string item;
        std::stringstream ss(ov.algorithms);
        while (std::getline(ss, item, ','))
            cfg.experiment.algorithms.push_back(secbeam::experiment::algorithm_from_name(item));
    }
    if (ov.full) cfg.experiment.realizations = cfg.experiment.realizations_full;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secbeam: secure IRS-aided MIMO beamforming simulator"};
    app.require_subcommand(1);

    Overrides run_ov, trace_ov, val_ov;
    CLI::App* run_cmd = app.add_subcommand("run", "run the configured experiment");
    add_common(run_cmd, run_ov);
    CLI::App* trace_cmd =
        app.add_subcommand("trace", "per-iteration convergence trace of each algorithm");
    add_common(trace_cmd, trace_ov);
    CLI::App* val_cmd = app.add_subcommand("validate", "parse and echo the configuration");
    add_common(val_cmd, val_ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            auto cfg = load(run_ov);
            secbeam::experiment::run_experiment(cfg, std::cout);
        } else if (trace_cmd->parsed()) {
            auto cfg = load(trace_ov);
            cfg.experiment.kind = secbeam::experiment::Kind::ConvergenceTrace;
            secbeam::experiment::run_experiment(cfg, std::cout);
        } else if (val_cmd->parsed()) {
            auto cfg = load(val_ov);
            std::cout << secbeam::experiment::serialize_config(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
