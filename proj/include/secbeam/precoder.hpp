#ifndef SECBEAM_PRECODER_HPP
#define SECBEAM_PRECODER_HPP

#include <utility>
#include <vector>

#include "secbeam/fp.hpp"

namespace secbeam::precoder {

/// Precomputed pieces of the per-user normal matrix
/// Gamma_k = gamma_base + tau_k * eve_gram + lambda_p * I and of the
/// right-hand-side scalings rho_k. gamma_base carries the user gram weighted
/// by |beta_k|^2; eve_gram is user-independent and cached once per phase.
struct PrecoderUpdateParams {
    CMatrix gamma_base;  // M x M Hermitian PSD
    CMatrix eve_gram;    // M x M Hermitian PSD
    RVector tau;         // >= 0
    CVector rho;
    double lambda_p = 0.0;
};

PrecoderUpdateParams build_update_params(const ChannelSet& cs, const PhaseVector& phi0,
                                         const fp::AuxState& aux, const Weights& weights,
                                         double p_max);

/// Closed-form precoder candidate at a fixed power multiplier. Columns with a
/// vanishing rho are zero without touching the solver. Throws SingularSystem
/// when Gamma_k is not positive definite (possible only at lambda_p = 0).
Precoder w_update(const ChannelSet& cs, const PhaseVector& phi0, const fp::AuxState& aux,
                  const Weights& weights, double p_max, double lambda_p);

/// Tunes the power multiplier by bisection on the transmit power, which is
/// monotone non-increasing in lambda_p. Returns the feasible-side precoder
/// and the multiplier; lambda_p = 0 whenever the constraint is inactive.
std::pair<Precoder, double> tune_lambda_p(const ChannelSet& cs, const PhaseVector& phi0,
                                          const fp::AuxState& aux, const Weights& weights,
                                          double p_max);

/// Inner loop of the first marginal problem: closed-form aux refresh followed
/// by the precoder update, iterated until the selected objective stalls.
/// The returned trace holds the objective after every iteration and is
/// non-decreasing within 1e-9 slack (violations raise MonotonicityViolation).
std::pair<Precoder, std::vector<double>> inner_loop_a1(
    const ChannelSet& cs, const PhaseVector& phi, const Selector& b, const Weights& weights,
    double p_max, const Precoder& w_init, int max_iter, double rel_tol);

}  // namespace secbeam::precoder

#endif
