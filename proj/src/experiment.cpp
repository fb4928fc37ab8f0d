#include "secbeam/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace secbeam::experiment {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for " + key + ": '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("expected integer for " + key);
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid seed value for " + key + ": '" + value + "'");
    }
}

Kind kind_from_name(const std::string& name) {
    if (name == "power_sweep") return Kind::PowerSweep;
    if (name == "irs_sweep") return Kind::IrsSweep;
    if (name == "antenna_sweep") return Kind::AntennaSweep;
    if (name == "eve_sweep") return Kind::EveSweep;
    if (name == "user_sweep") return Kind::UserSweep;
    if (name == "quant_sweep") return Kind::QuantSweep;
    if (name == "convergence_trace") return Kind::ConvergenceTrace;
    if (name == "runtime_scaling") return Kind::RuntimeScaling;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

phase::Tuner tuner_from_name(const std::string& name) {
    if (name == "mm") return phase::Tuner::MM;
    if (name == "bcd") return phase::Tuner::BCD;
    throw ConfigError("unknown tuner '" + name + "'");
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::PowerSweep: return "power_sweep";
        case Kind::IrsSweep: return "irs_sweep";
        case Kind::AntennaSweep: return "antenna_sweep";
        case Kind::EveSweep: return "eve_sweep";
        case Kind::UserSweep: return "user_sweep";
        case Kind::QuantSweep: return "quant_sweep";
        case Kind::ConvergenceTrace: return "convergence_trace";
        case Kind::RuntimeScaling: return "runtime_scaling";
    }
    return "?";
}

std::string algorithm_name(scenario::Algorithm a) {
    switch (a) {
        case scenario::Algorithm::TwoTiers: return "two_tiers";
        case scenario::Algorithm::SingleLoop: return "single_loop";
        case scenario::Algorithm::Ref1: return "ref1";
        case scenario::Algorithm::Ref2: return "ref2";
    }
    return "?";
}

scenario::Algorithm algorithm_from_name(const std::string& name) {
    if (name == "two_tiers") return scenario::Algorithm::TwoTiers;
    if (name == "single_loop") return scenario::Algorithm::SingleLoop;
    if (name == "ref1") return scenario::Algorithm::Ref1;
    if (name == "ref2") return scenario::Algorithm::Ref2;
    throw ConfigError("unknown algorithm '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (sweep_values.empty()) throw ConfigError("experiment.sweep must be non-empty");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
        if (!(sweep_values[i] > sweep_values[i - 1]))
            throw ConfigError("experiment.sweep must be strictly increasing");
    if (algorithms.empty()) throw ConfigError("experiment.algorithms must be non-empty");
    if (realizations < 1 || realizations_full < 1)
        throw ConfigError("experiment.realizations must be positive");
    if (jobs < 0) throw ConfigError("experiment.jobs must be non-negative");
    if (output_path.empty()) throw ConfigError("experiment.output must be set");
    if (kind == Kind::QuantSweep)
        for (double b : sweep_values)
            if (b != std::floor(b) || b < 0 || b > 16)
                throw ConfigError("quant_sweep values must be whole bits in 0..16");
}

Config parse_config(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);

        auto& sc = cfg.scenario;
        auto& oc = cfg.optimizer;
        auto& ex = cfg.experiment;
        if (key == "scenario.tx_antennas") sc.dims.tx_antennas = parse_int(key, value);
        else if (key == "scenario.irs_elements") sc.dims.irs_elements = parse_int(key, value);
        else if (key == "scenario.users") sc.dims.users = parse_int(key, value);
        else if (key == "scenario.eves") sc.dims.eves = parse_int(key, value);
        else if (key == "scenario.bs_irs_distance_m") sc.bs_irs_distance_m = parse_double(key, value);
        else if (key == "scenario.user_disk_radius_m") sc.user_disk_radius_m = parse_double(key, value);
        else if (key == "scenario.eve_disk_radius_m") sc.eve_disk_radius_m = parse_double(key, value);
        else if (key == "scenario.ref_loss_db") sc.ref_loss_db = parse_double(key, value);
        else if (key == "scenario.pathloss_exp_direct") sc.exp_direct = parse_double(key, value);
        else if (key == "scenario.pathloss_exp_reflect") sc.exp_reflect = parse_double(key, value);
        else if (key == "scenario.noise_db") sc.noise_db = parse_double(key, value);
        else if (key == "scenario.p_max_db") sc.p_max_db = parse_double(key, value);
        else if (key == "scenario.seed") sc.seed = parse_u64(key, value);
        else if (key == "optimizer.tuner") oc.tuner = tuner_from_name(value);
        else if (key == "optimizer.outer_max_iter") oc.outer_max_iter = parse_int(key, value);
        else if (key == "optimizer.outer_rel_tol") oc.outer_rel_tol = parse_double(key, value);
        else if (key == "optimizer.inner_max_iter_a1") oc.inner_max_iter_a1 = parse_int(key, value);
        else if (key == "optimizer.inner_max_iter_a2") oc.inner_max_iter_a2 = parse_int(key, value);
        else if (key == "optimizer.tuner_max_iter") oc.tuner_max_iter = parse_int(key, value);
        else if (key == "optimizer.inner_rel_tol") oc.inner_rel_tol = parse_double(key, value);
        else if (key == "optimizer.tuner_rel_tol") oc.tuner_rel_tol = parse_double(key, value);
        else if (key == "experiment.kind") ex.kind = kind_from_name(value);
        else if (key == "experiment.sweep") {
            ex.sweep_values.clear();
            for (const auto& item : split(value, ','))
                ex.sweep_values.push_back(parse_double(key, item));
        } else if (key == "experiment.algorithms") {
            ex.algorithms.clear();
            for (const auto& item : split(value, ','))
                ex.algorithms.push_back(algorithm_from_name(item));
        } else if (key == "experiment.realizations") ex.realizations = parse_int(key, value);
        else if (key == "experiment.realizations_full") ex.realizations_full = parse_int(key, value);
        else if (key == "experiment.jobs") ex.jobs = parse_int(key, value);
        else if (key == "experiment.output") ex.output_path = value;
        else if (key == "experiment.per_realization_output") ex.per_realization_path = value;
        else
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    cfg.scenario.validate();
    cfg.optimizer.validate();
    cfg.experiment.validate();
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    return parse_config(in);
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string serialize_config(const Config& cfg) {
    std::ostringstream out;
    const auto& sc = cfg.scenario;
    const auto& oc = cfg.optimizer;
    const auto& ex = cfg.experiment;
    out << "scenario.tx_antennas = " << sc.dims.tx_antennas << "\n";
    out << "scenario.irs_elements = " << sc.dims.irs_elements << "\n";
    out << "scenario.users = " << sc.dims.users << "\n";
    out << "scenario.eves = " << sc.dims.eves << "\n";
    out << "scenario.bs_irs_distance_m = " << format_g12(sc.bs_irs_distance_m) << "\n";
    out << "scenario.user_disk_radius_m = " << format_g12(sc.user_disk_radius_m) << "\n";
    out << "scenario.eve_disk_radius_m = " << format_g12(sc.eve_disk_radius_m) << "\n";
    out << "scenario.ref_loss_db = " << format_g12(sc.ref_loss_db) << "\n";
    out << "scenario.pathloss_exp_direct = " << format_g12(sc.exp_direct) << "\n";
    out << "scenario.pathloss_exp_reflect = " << format_g12(sc.exp_reflect) << "\n";
    out << "scenario.noise_db = " << format_g12(sc.noise_db) << "\n";
    out << "scenario.p_max_db = " << format_g12(sc.p_max_db) << "\n";
    out << "scenario.seed = " << sc.seed << "\n";
    out << "optimizer.tuner = " << (oc.tuner == phase::Tuner::MM ? "mm" : "bcd") << "\n";
    out << "optimizer.outer_max_iter = " << oc.outer_max_iter << "\n";
    out << "optimizer.outer_rel_tol = " << format_g12(oc.outer_rel_tol) << "\n";
    out << "optimizer.inner_max_iter_a1 = " << oc.inner_max_iter_a1 << "\n";
    out << "optimizer.inner_max_iter_a2 = " << oc.inner_max_iter_a2 << "\n";
    out << "optimizer.tuner_max_iter = " << oc.tuner_max_iter << "\n";
    out << "optimizer.inner_rel_tol = " << format_g12(oc.inner_rel_tol) << "\n";
    out << "optimizer.tuner_rel_tol = " << format_g12(oc.tuner_rel_tol) << "\n";
    out << "experiment.kind = " << kind_name(ex.kind) << "\n";
    out << "experiment.sweep = ";
    for (std::size_t i = 0; i < ex.sweep_values.size(); ++i)
        out << (i ? "," : "") << format_g12(ex.sweep_values[i]);
    out << "\n";
    out << "experiment.algorithms = ";
    for (std::size_t i = 0; i < ex.algorithms.size(); ++i)
        out << (i ? "," : "") << algorithm_name(ex.algorithms[i]);
    out << "\n";
    out << "experiment.realizations = " << ex.realizations << "\n";
    out << "experiment.realizations_full = " << ex.realizations_full << "\n";
    out << "experiment.jobs = " << ex.jobs << "\n";
    out << "experiment.output = " << ex.output_path << "\n";
    if (!ex.per_realization_path.empty())
        out << "experiment.per_realization_output = " << ex.per_realization_path << "\n";
    return out.str();
}

namespace {

scenario::ScenarioConfig apply_sweep(const scenario::ScenarioConfig& base, Kind kind,
                                     double value) {
    scenario::ScenarioConfig sc = base;
    switch (kind) {
        case Kind::PowerSweep: sc.p_max_db = value; break;
        case Kind::IrsSweep: sc.dims.irs_elements = static_cast<int>(value); break;
        case Kind::AntennaSweep: sc.dims.tx_antennas = static_cast<int>(value); break;
        case Kind::EveSweep: sc.dims.eves = static_cast<int>(value); break;
        case Kind::UserSweep: sc.dims.users = static_cast<int>(value); break;
        case Kind::RuntimeScaling: sc.dims.irs_elements = static_cast<int>(value); break;
        case Kind::QuantSweep:
        case Kind::ConvergenceTrace: break;
    }
    return sc;
}

std::string run_sweep(const Config& cfg, std::ostream& console) {
    std::ostringstream body;
    body << "sweep_param,algorithm,mean_wssr,stderr_wssr,mean_runtime_ms,n_realizations\n";
    const auto& ex = cfg.experiment;
    std::ofstream per_out;
    if (!ex.per_realization_path.empty()) {
        per_out.open(ex.per_realization_path);
        if (!per_out) throw IoError("cannot open " + ex.per_realization_path);
        per_out << "sweep_param,algorithm,realization,wssr,runtime_ms\n";
    }
    for (double value : ex.sweep_values) {
        const scenario::ScenarioConfig sc = apply_sweep(cfg.scenario, ex.kind, value);
        scenario::QuantizerConfig quant;
        if (ex.kind == Kind::QuantSweep) quant.bits = static_cast<int>(value);
        optimizer::OptimizerConfig oc = cfg.optimizer;
        if (ex.kind == Kind::RuntimeScaling) oc.outer_rel_tol = 0.0;  // fixed iteration count
        for (scenario::Algorithm alg : ex.algorithms) {
            std::vector<scenario::RealizationOutcome> per;
            const auto res = scenario::ergodic_average(
                [&](int idx, std::uint64_t seed) {
                    (void)idx;
                    return scenario::run_realization(sc, oc, alg, seed, quant);
                },
                sc.seed, ex.realizations, ex.jobs, per_out.is_open() ? &per : nullptr);
            if (per_out.is_open()) {
                for (std::size_t r = 0; r < per.size(); ++r)
                    per_out << format_g12(value) << ',' << algorithm_name(alg) << ',' << r << ','
                            << format_g12(per[r].value) << ',' << format_g12(per[r].runtime_ms)
                            << "\n";
                per_out.flush();
            }
            body << format_g12(value) << ',' << algorithm_name(alg) << ','
                 << format_g12(res.mean) << ',' << format_g12(res.std_error) << ','
                 << format_g12(res.mean_runtime_ms) << ',' << res.realizations << "\n";
            console << kind_name(ex.kind) << " " << format_g12(value) << " "
                    << algorithm_name(alg) << ": mean_wssr=" << format_g12(res.mean)
                    << " stderr=" << format_g12(res.std_error)
                    << " mean_ms=" << format_g12(res.mean_runtime_ms) << "\n";
        }
    }
    return body.str();
}

std::string run_trace(const Config& cfg, std::ostream& console) {
    const auto& ex = cfg.experiment;
    const std::uint64_t seed = derive_seed(cfg.scenario.seed, 0);
    std::vector<std::vector<double>> columns;
    std::size_t rows = 0;
    for (scenario::Algorithm alg : ex.algorithms) {
        scenario::ScenarioConfig sc = cfg.scenario;
        sc.seed = seed;
        Rng rng(seed);
        const ChannelSet cs = scenario::sample_channels(sc, rng);
        const Weights weights = Weights::uniform(cs.dims.users);
        optimizer::OptimizerConfig oc = cfg.optimizer;
        oc.seed = derive_seed(seed, 0x5eedULL);
        optimizer::RunTrace trace;
        switch (alg) {
            case scenario::Algorithm::TwoTiers:
                oc.mode = optimizer::Mode::TwoTiers;
                trace = optimizer::two_tiers(cs, weights, sc.p_max(), oc);
                break;
            case scenario::Algorithm::SingleLoop:
                trace = optimizer::single_loop(cs, weights, sc.p_max(), oc);
                break;
            case scenario::Algorithm::Ref1:
                trace = scenario::baseline_ref1(cs, weights, sc.p_max(), oc);
                break;
            case scenario::Algorithm::Ref2:
                trace = scenario::baseline_ref2(cs, weights, sc.p_max(), oc, rng);
                break;
        }
        console << "trace " << algorithm_name(alg) << ": " << trace.objective.size()
                << " iterations, final wssr=" << format_g12(trace.final_objective()) << "\n";
        rows = std::max(rows, trace.objective.size());
        columns.push_back(trace.objective);
    }

    std::ostringstream body;
    body << "iter";
    for (scenario::Algorithm alg : ex.algorithms) body << ',' << algorithm_name(alg) << "_wssr";
    body << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        body << (r + 1);
        for (const auto& col : columns) {
            const double v = col.empty() ? 0.0 : (r < col.size() ? col[r] : col.back());
            body << ',' << format_g12(v);
        }
        body << "\n";
    }
    return body.str();
}

}  // namespace

std::string run_experiment(const Config& cfg, std::ostream& console) {
    cfg.experiment.validate();
    cfg.scenario.validate();
    cfg.optimizer.validate();

    const std::string body = cfg.experiment.kind == Kind::ConvergenceTrace
                                 ? run_trace(cfg, console)
                                 : run_sweep(cfg, console);

    std::ofstream out(cfg.experiment.output_path);
    if (!out) throw IoError("cannot open output file " + cfg.experiment.output_path);
    out << body;
    if (!out) throw IoError("failed writing " + cfg.experiment.output_path);
    console << "wrote " << cfg.experiment.output_path << "\n";
    return body;
}

}  // namespace secbeam::experiment
