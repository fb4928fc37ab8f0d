#ifndef SECBEAM_EXPERIMENT_HPP
#define SECBEAM_EXPERIMENT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "secbeam/scenario.hpp"

namespace secbeam::experiment {

enum class Kind {
    PowerSweep,
    IrsSweep,
    AntennaSweep,
    EveSweep,
    UserSweep,
    QuantSweep,
    ConvergenceTrace,
    RuntimeScaling,
};

struct ExperimentSpec {
    Kind kind = Kind::PowerSweep;
    std::vector<double> sweep_values{-30.0};
    std::vector<scenario::Algorithm> algorithms{
        scenario::Algorithm::TwoTiers, scenario::Algorithm::SingleLoop,
        scenario::Algorithm::Ref1, scenario::Algorithm::Ref2};
    int realizations = 8;
    int realizations_full = 100;
    int jobs = 0;
    std::string output_path = "out.csv";
    std::string per_realization_path;  // optional per-realization CSV

    void validate() const;
};

struct Config {
    scenario::ScenarioConfig scenario;
    optimizer::OptimizerConfig optimizer;
    ExperimentSpec experiment;
};

/// key = value text, one per line, '#' comments. Unknown keys are rejected
/// with the offending line; missing keys take the documented defaults.
Config parse_config(std::istream& in);
Config parse_config_file(const std::string& path);

/// Canonical text form; parse(serialize(c)) reproduces c.
std::string serialize_config(const Config& cfg);

std::string kind_name(Kind k);
std::string algorithm_name(scenario::Algorithm a);
scenario::Algorithm algorithm_from_name(const std::string& name);

/// Fixed 12-significant-digit form used for every CSV numeric field.
std::string format_g12(double v);

/// Runs the experiment and writes the result CSV to the configured path.
/// Sweep kinds emit one row per (sweep value, algorithm); the trace kind
/// emits per-iteration objective columns. Deterministic under the master
/// seed except for wall-clock columns. Returns the CSV body.
std::string run_experiment(const Config& cfg, std::ostream& console);

}  // namespace secbeam::experiment

#endif
