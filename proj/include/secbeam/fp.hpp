#ifndef SECBEAM_FP_HPP
#define SECBEAM_FP_HPP

#include <utility>

#include "secbeam/channel.hpp"
#include "secbeam/types.hpp"

namespace secbeam::fp {

/// log2(1+x) - x; non-positive on x >= 0 with zeros exactly at 0 and 1.
double xi(double x);

/// All auxiliary variables of the fractional-programming reformulation,
/// grouped per closed-form update. gamma and varpi are carried for
/// completeness and testing; no other update consumes them.
struct AuxState {
    RVector t;       // user dual aux, ratio of signal to interference-plus-noise
    RVector alpha;   // eavesdropper dual aux
    CVector beta;    // quadratic aux of the precoder problem
    CVector gamma;   // eavesdropper quadratic aux of the precoder problem
    CVector f;       // quadratic aux of the phase problem
    RVector q;       // user dual aux of the phase problem
    RVector psi;     // eavesdropper dual aux of the phase problem
    CVector varpi;   // eavesdropper quadratic aux of the phase problem
    Selector b;

    static AuxState zeros(int users) {
        AuxState s;
        s.t = RVector::Zero(users);
        s.alpha = RVector::Zero(users);
        s.beta = CVector::Zero(users);
        s.gamma = CVector::Zero(users);
        s.f = CVector::Zero(users);
        s.q = RVector::Zero(users);
        s.psi = RVector::Zero(users);
        s.varpi = CVector::Zero(users);
        s.b = Selector::all_ones(users);
        return s;
    }
};

/// Component quantities of the precoder marginal problem, one entry per user
/// plus the shared leakage cap. Computed at a fixed phase vector.
struct MarginalW {
    RVector signal;         // |h_k^H w_k|^2
    RVector interference;   // cross-talk power plus noise
    RVector leak;           // 1 + ESNR_k
    RVector leak_margin;    // cap - leak, >= 0 by Cauchy-Schwarz + power budget
    double leak_cap = 1.0;  // 1 + ||precision * eve matrix||_F^2 * p_max
};

/// Component quantities of the phase marginal problem. The leakage cap is
/// per-user here, obtained from the triangle inequality with ||phi|| = sqrt(N).
struct MarginalPhi {
    RVector signal;
    RVector interference;
    RVector leak;
    RVector leak_margin;  // clamped at zero against cancellation residue
    RVector leak_cap;
};

MarginalW marginal_w_components(const ChannelSet& cs, const Precoder& w,
                                const PhaseVector& phi0);

MarginalPhi marginal_phi_components(const ChannelSet& cs, const Precoder& w0,
                                    const PhaseVector& phi);

/// Per-user leakage caps of the phase problem; independent of the phase
/// vector, so callers that only need the caps can skip the full marginals.
RVector phase_leak_caps(const ChannelSet& cs, const Precoder& w0);

/// Dual aux updates: exact marginal maximizers, equal to the SINR (t) and the
/// leakage-margin ratio (alpha) at the current precoder.
RVector update_t(const MarginalW& mw);
RVector update_alpha(const MarginalW& mw);

/// Quadratic aux update for the precoder problem.
CVector update_beta(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi0,
                    const RVector& t, const Weights& weights, const Selector& b);

CVector update_gamma(const MarginalW& mw, const Weights& weights, const Selector& b,
                     const RVector& alpha);

/// Quadratic aux update for the phase problem.
CVector update_f(const ChannelSet& cs, const Precoder& w0, const PhaseVector& phi,
                 const RVector& q, const Weights& weights, const Selector& b);

std::pair<RVector, RVector> update_q_psi(const MarginalPhi& mp);

CVector update_varpi(const MarginalPhi& mp, const Weights& weights, const Selector& b,
                     const RVector& psi);

/// Selector update: strict comparison, ties deactivate the user.
Selector update_b(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi);

/// Lagrangian-dual objective of the precoder marginal problem (both the user
/// and eavesdropper parts); used by marginal-maximizer tests. Evaluated in
/// natural-log units: the closed-form aux updates are the exact maximizers
/// of the nat-log dual, and the final rates are rescaled to bits only when
/// reported.
double dual_objective_w(const MarginalW& mw, const Weights& weights, const Selector& b,
                        const RVector& t, const RVector& alpha);

/// Same for the phase marginal problem.
double dual_objective_phi(const MarginalPhi& mp, const Weights& weights, const Selector& b,
                          const RVector& q, const RVector& psi);

/// Quadratic-transform objective of the precoder problem at fixed (t, alpha).
double quad_objective_w(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi0,
                        const Weights& weights, const Selector& b, const RVector& t,
                        const RVector& alpha, const CVector& beta, const CVector& gamma);

/// Quadratic-transform objective of the phase problem at fixed (q, psi).
double quad_objective_phi(const ChannelSet& cs, const Precoder& w0, const PhaseVector& phi,
                          const Weights& weights, const Selector& b, const RVector& q,
                          const RVector& psi, const CVector& f, const CVector& varpi);

}  // namespace secbeam::fp

#endif
