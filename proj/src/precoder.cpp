#include "secbeam/precoder.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "secbeam/linalg.hpp"

namespace secbeam::precoder {

namespace {

constexpr double kMonotoneSlack = 1e-9;

double selector_weight(const Weights& weights, const Selector& b, int k) {
    return b.on[static_cast<std::size_t>(k)] ? weights.omega[k] : 0.0;
}

/// Spectral form of the power curve: per active user the eigenbasis of
/// Gamma_k(0) and the rotated right-hand side, so that
/// power(lambda) = sum_k |rho_k|^2 sum_m |c_km|^2 / (d_km + lambda)^2
/// costs O(M) per evaluation inside the bisection.
struct PowerCurve {
    std::vector<RVector> evals;
    std::vector<RVector> rhs_sq;  // |rho_k|^2 |c_km|^2
    std::vector<CMatrix> basis;
    std::vector<CVector> rotated_rhs;  // rho_k * V_k^H h_k
    std::vector<int> user;

    double operator()(double lambda) const {
        double total = 0.0;
        for (std::size_t i = 0; i < evals.size(); ++i) {
            const RVector& d = evals[i];
            const RVector& c2 = rhs_sq[i];
            for (Eigen::Index m = 0; m < d.size(); ++m) {
                if (c2[m] == 0.0) continue;
                const double den = d[m] + lambda;
                if (den <= 0.0) return std::numeric_limits<double>::infinity();
                total += c2[m] / (den * den);
            }
        }
        return total;
    }
};

PowerCurve build_power_curve(const ChannelSet& cs, const CMatrix& h,
                             const PrecoderUpdateParams& params) {
    PowerCurve curve;
    for (int k = 0; k < cs.dims.users; ++k) {
        if (params.rho[k] == Complex(0.0, 0.0)) continue;
        CMatrix gamma0 = params.gamma_base + params.tau[k] * params.eve_gram;
        gamma0 = 0.5 * (gamma0 + gamma0.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gamma0);
        if (es.info() != Eigen::Success) throw NoConvergence("eigendecomposition failed");
        RVector d = es.eigenvalues().cwiseMax(0.0);
        CVector c = params.rho[k] * (es.eigenvectors().adjoint() * h.col(k));
        curve.evals.push_back(std::move(d));
        curve.rhs_sq.push_back(c.cwiseAbs2());
        curve.basis.push_back(es.eigenvectors());
        curve.rotated_rhs.push_back(std::move(c));
        curve.user.push_back(k);
    }
    return curve;
}

/// Precoder columns from the spectral representation; modes with a zero
/// eigenvalue and zero rotated load are treated as absent (the limit of the
/// regularized solution as lambda -> 0+).
Precoder precoder_from_curve(const ChannelSet& cs, const PowerCurve& curve, double lambda,
                             double p_max) {
    Precoder w;
    w.w = CMatrix::Zero(cs.dims.tx_antennas, cs.dims.users);
    w.p_max = p_max;
    for (std::size_t i = 0; i < curve.user.size(); ++i) {
        const RVector& d = curve.evals[i];
        const CVector& c = curve.rotated_rhs[i];
        CVector scaled = CVector::Zero(d.size());
        for (Eigen::Index m = 0; m < d.size(); ++m) {
            if (c[m] == Complex(0.0, 0.0)) continue;
            scaled[m] = c[m] / (d[m] + lambda);
        }
        w.w.col(curve.user[i]) = curve.basis[i] * scaled;
    }
    return w;
}

}  // namespace

PrecoderUpdateParams build_update_params(const ChannelSet& cs, const PhaseVector& phi0,
                                         const fp::AuxState& aux, const Weights& weights,
                                         double p_max) {
    const int m = cs.dims.tx_antennas;
    const CMatrix h = effective_user_matrix(cs, phi0);
    const CMatrix g = effective_eve_matrix(cs, phi0);

    PrecoderUpdateParams params;
    params.gamma_base = CMatrix::Zero(m, m);
    for (int k = 0; k < cs.dims.users; ++k)
        params.gamma_base += std::norm(aux.beta[k]) * (h.col(k) * h.col(k).adjoint());
    params.gamma_base = 0.5 * (params.gamma_base + params.gamma_base.adjoint());

    params.eve_gram = CMatrix::Zero(m, m);
    for (int j = 0; j < cs.dims.eves; ++j)
        params.eve_gram += (g.col(j) * g.col(j).adjoint()) / cs.noise_eves[j];
    params.eve_gram = 0.5 * (params.eve_gram + params.eve_gram.adjoint());

    double eve_frob = 0.0;
    for (int j = 0; j < cs.dims.eves; ++j) eve_frob += g.col(j).squaredNorm() / cs.noise_eves[j];
    const double leak_cap = 1.0 + eve_frob * p_max;

    params.tau = RVector::Zero(cs.dims.users);
    params.rho = CVector::Zero(cs.dims.users);
    for (int k = 0; k < cs.dims.users; ++k) {
        const double wk = selector_weight(weights, aux.b, k);
        params.tau[k] = wk * (1.0 + aux.alpha[k]) / leak_cap;
        params.rho[k] = std::sqrt(wk * (1.0 + aux.t[k])) * aux.beta[k];
    }
    return params;
}

Precoder w_update(const ChannelSet& cs, const PhaseVector& phi0, const fp::AuxState& aux,
                  const Weights& weights, double p_max, double lambda_p) {
    if (lambda_p < 0.0) throw NegativeInput("w_update: negative power multiplier");
    const CMatrix h = effective_user_matrix(cs, phi0);
    const PrecoderUpdateParams params = build_update_params(cs, phi0, aux, weights, p_max);

    Precoder w;
    w.w = CMatrix::Zero(cs.dims.tx_antennas, cs.dims.users);
    w.p_max = p_max;
    const CMatrix eye = CMatrix::Identity(cs.dims.tx_antennas, cs.dims.tx_antennas);
    for (int k = 0; k < cs.dims.users; ++k) {
        if (params.rho[k] == Complex(0.0, 0.0)) continue;
        const CMatrix gamma =
            params.gamma_base + params.tau[k] * params.eve_gram + lambda_p * eye;
        CVector rhs = params.rho[k] * h.col(k);
        try {
            w.w.col(k) = linalg::solve_hpd(gamma, rhs);
        } catch (const NotPositiveDefinite&) {
            throw SingularSystem("w_update: Gamma_k is singular at lambda_p = 0");
        }
    }
    return w;
}

std::pair<Precoder, double> tune_lambda_p(const ChannelSet& cs, const PhaseVector& phi0,
                                          const fp::AuxState& aux, const Weights& weights,
                                          double p_max) {
    const CMatrix h = effective_user_matrix(cs, phi0);
    const PrecoderUpdateParams params = build_update_params(cs, phi0, aux, weights, p_max);
    const PowerCurve curve = build_power_curve(cs, h, params);

    Precoder zero;
    zero.w = CMatrix::Zero(cs.dims.tx_antennas, cs.dims.users);
    zero.p_max = p_max;
    if (curve.user.empty()) return {zero, 0.0};

    // Inactive constraint: the unconstrained (limit) solution already fits.
    if (curve(0.0) <= p_max) return {precoder_from_curve(cs, curve, 0.0, p_max), 0.0};

    double hi = 1.0;
    const double cap = std::ldexp(1.0, 60);
    while (curve(hi) > p_max) {
        hi *= 2.0;
        if (hi > cap) throw BracketInvalid("tune_lambda_p: multiplier bracket expansion capped");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;

    // Bisect to a tight relative width; the loose power tolerance alone would
    // leave enough multiplier slop to break the monotone-step contract.
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (curve(mid) > p_max)
            lo = mid;
        else
            hi = mid;
    }

    const double lambda = hi;  // feasible side
    // The precoder comes from the same spectral representation the bisection
    // evaluated, so its power matches the tuned curve value exactly.
    Precoder w = precoder_from_curve(cs, curve, lambda, p_max);
    if (std::abs(w.power() - p_max) > 1e-6 * p_max)
        throw NoConvergence("tune_lambda_p: power tolerance not reached");
    return {w, lambda};
}

std::pair<Precoder, std::vector<double>> inner_loop_a1(
    const ChannelSet& cs, const PhaseVector& phi, const Selector& b, const Weights& weights,
    double p_max, const Precoder& w_init, int max_iter, double rel_tol) {
    Precoder w = w_init;
    w.p_max = p_max;
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(std::max(max_iter, 0)));
    double prev = wssr_q(cs, w, phi, weights, b);
    for (int it = 0; it < max_iter; ++it) {
        // All closed forms are evaluated at the same current precoder; the
        // dual aux inside the quadratic-aux update is the fresh one, which is
        // what makes every iteration an exact block-maximizer step.
        const fp::MarginalW mw = fp::marginal_w_components(cs, w, phi);
        fp::AuxState aux = fp::AuxState::zeros(cs.dims.users);
        aux.b = b;
        aux.t = fp::update_t(mw);
        aux.alpha = fp::update_alpha(mw);
        aux.beta = fp::update_beta(cs, w, phi, aux.t, weights, b);
        auto [w_new, lambda] = tune_lambda_p(cs, phi, aux, weights, p_max);
        (void)lambda;
        w = std::move(w_new);

        const double cur = wssr_q(cs, w, phi, weights, b);
        trace.push_back(cur);
        if (cur < prev - kMonotoneSlack)
            throw MonotonicityViolation("inner precoder loop decreased the objective");
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) break;
        prev = cur;
    }
    return {w, trace};
}

}  // namespace secbeam::precoder
