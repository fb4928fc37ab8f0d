#ifndef SECBEAM_PHASE_HPP
#define SECBEAM_PHASE_HPP

#include <utility>
#include <vector>

#include "secbeam/fp.hpp"

namespace secbeam::phase {

enum class Tuner { MM, BCD };

/// Coordinate source for the element-wise updates: Snapshot evaluates every
/// element against the previous sweep's vector (the pure majorization step),
/// InPlace consumes already-updated entries within the sweep.
enum class SweepMode { Snapshot, InPlace };

/// Quadratic form of the phase subproblem: minimizing
/// phi^H U phi + 2 Re{phi^H v} over unit-modulus phi maximizes the
/// transformed objective up to a constant.
struct QuadraticForm {
    CMatrix u;          // N x N Hermitian PSD
    CVector v;          // N
    RVector kappa;      // per-user leakage weight, >= 0
    CVector eta;        // per-user signal weight
    double lambda_max = 0.0;
};

/// Assembles (U, v) from the current precoder and phase-problem aux state.
/// Row blocks are computed independently (OpenMP when available), which keeps
/// the result bit-identical across thread counts.
QuadraticForm build_quadratic(const ChannelSet& cs, const Precoder& w0,
                              const fp::AuxState& aux, const Weights& weights);

/// Straightforward single-threaded assembly, kept as the reference the
/// parallel kernel is tested and benchmarked against.
QuadraticForm build_quadratic_serial(const ChannelSet& cs, const Precoder& w0,
                                     const fp::AuxState& aux, const Weights& weights);

/// phi^H U phi + 2 Re{phi^H v}; the minimization objective of the tuners.
double quadratic_value(const QuadraticForm& qf, const PhaseVector& phi);

/// Cold-start point for the tuners when no warm iterate exists: the exact
/// minimizer of the linear term, which is the global solution whenever the
/// element coupling vanishes. Elements with no linear pull start at one.
PhaseVector aligned_start(const QuadraticForm& qf);

/// Majorization-based tuner: shifts by the top eigenvalue and renormalizes
/// every element per sweep. Elements with a vanishing update direction keep
/// their previous value. Stops when the quadratic objective stalls.
PhaseVector mm_tune(const QuadraticForm& qf, const PhaseVector& phi0, int max_iter,
                    double rel_tol, SweepMode mode = SweepMode::Snapshot);

/// Element-wise coordinate tuner solving each phase exactly given the others.
PhaseVector bcd_tune(const QuadraticForm& qf, const PhaseVector& phi0, int max_iter,
                     double rel_tol, SweepMode mode = SweepMode::InPlace);

/// Inner loop of the second marginal problem: fresh dual/quadratic aux at the
/// current phase vector, then one tuner call per iteration. The trace of the
/// selected objective is non-decreasing within 1e-9 slack.
std::pair<PhaseVector, std::vector<double>> inner_loop_a2(
    const ChannelSet& cs, const Precoder& w, const Selector& b, const Weights& weights,
    const PhaseVector& phi_init, Tuner tuner, int tuner_max_iter, double tuner_rel_tol,
    int max_iter, double rel_tol);

}  // namespace secbeam::phase

#endif
