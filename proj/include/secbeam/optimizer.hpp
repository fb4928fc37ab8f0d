#ifndef SECBEAM_OPTIMIZER_HPP
#define SECBEAM_OPTIMIZER_HPP

#include <cstdint>
#include <iosfwd>
#include <tuple>
#include <vector>

#include "secbeam/phase.hpp"
#include "secbeam/precoder.hpp"

namespace secbeam::optimizer {

enum class Mode { TwoTiers, SingleLoop };

struct OptimizerConfig {
    Mode mode = Mode::TwoTiers;
    phase::Tuner tuner = phase::Tuner::MM;
    int outer_max_iter = 30;
    double outer_rel_tol = 1e-4;
    // Moderate inner budgets: deep inner convergence entrenches the precoder
    // and phase blocks in each other's leakage nulls and the joint iteration
    // stalls in poorer fixed points. Monotonicity holds for any budgets.
    int inner_max_iter_a1 = 3;
    int inner_max_iter_a2 = 5;
    int tuner_max_iter = 30;
    double inner_rel_tol = 1e-5;
    double tuner_rel_tol = 1e-6;
    std::uint64_t seed = 1;
    bool record_iterates = false;  // per-iteration (W, phi) snapshots, for tests

    void validate() const;
    /// Single-loop is the two-tiers driver with every inner budget forced to
    /// a single pass.
    OptimizerConfig effective() const;
};

/// Per-run record: the clamped objective after every outer iteration (the
/// monotone series), the selected objective as a secondary diagnostic, wall
/// times, and the final operating point.
struct RunTrace {
    double initial_objective = 0.0;
    std::vector<double> objective;    // clamped weighted secrecy sum-rate
    std::vector<double> objective_q;  // selected unclamped counterpart
    std::vector<double> wall_ms;
    Precoder final_w;
    PhaseVector final_phi;
    Selector final_b;
    bool converged = false;

    std::vector<Precoder> w_iterates;      // filled when record_iterates
    std::vector<PhaseVector> phi_iterates;

    double final_objective() const { return objective.empty() ? initial_objective : objective.back(); }
    double total_ms() const;
    /// CSV with columns iter, wssr, wssr_q, wall_ms (iteration 0 = initial point).
    void write_csv(std::ostream& out) const;
    /// Key/value text block: iteration count, convergence flag, objectives.
    void write_summary(std::ostream& out) const;
};

/// Seeded starting point: uniform random phases, matched-filter precoder
/// projected away from the eavesdropper channels (when they leave room) and
/// scaled to the full power budget, all users selected.
std::tuple<Precoder, PhaseVector, Selector> initialize(const ChannelSet& cs, double p_max,
                                                       std::uint64_t seed);

/// Outer driver alternating precoder inner loop, phase inner loop and the
/// selector update until the clamped objective stalls.
RunTrace two_tiers(const ChannelSet& cs, const Weights& weights, double p_max,
                   const OptimizerConfig& cfg);

/// One pass of every closed-form update per outer iteration.
RunTrace single_loop(const ChannelSet& cs, const Weights& weights, double p_max,
                     const OptimizerConfig& cfg);

/// Precoder-only driver used by the reference scenarios: the phase vector
/// stays fixed, only the precoder loop and the selector update alternate.
RunTrace precoder_only(const ChannelSet& cs, const Weights& weights, double p_max,
                       const PhaseVector& phi, const OptimizerConfig& cfg);

}  // namespace secbeam::optimizer

#endif
