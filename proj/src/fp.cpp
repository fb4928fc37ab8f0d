#include "secbeam/fp.hpp"

#include <cmath>

namespace secbeam::fp {

double xi(double x) {
    if (x < 0.0) throw NegativeInput("xi: negative argument");
    return std::log1p(x) * detail::kLog2Inv - x;
}

MarginalW marginal_w_components(const ChannelSet& cs, const Precoder& w,
                                const PhaseVector& phi0) {
    const int users = cs.dims.users, eves = cs.dims.eves;
    const CMatrix h = effective_user_matrix(cs, phi0);
    const CMatrix g = effective_eve_matrix(cs, phi0);

    MarginalW mw;
    mw.signal = RVector::Zero(users);
    mw.interference = RVector::Zero(users);
    mw.leak = RVector::Zero(users);
    mw.leak_margin = RVector::Zero(users);

    double eve_frob = 0.0;  // ||precision * g^H||_F^2
    for (int j = 0; j < eves; ++j) eve_frob += g.col(j).squaredNorm() / cs.noise_eves[j];
    mw.leak_cap = 1.0 + eve_frob * w.p_max;

    for (int k = 0; k < users; ++k) {
        double interference = cs.noise_users[k];
        for (int i = 0; i < users; ++i) {
            const double p = std::norm(h.col(k).dot(w.w.col(i)));
            if (i == k)
                mw.signal[k] = p;
            else
                interference += p;
        }
        mw.interference[k] = interference;
        double leak = 1.0;
        for (int j = 0; j < eves; ++j)
            leak += std::norm(g.col(j).dot(w.w.col(k))) / cs.noise_eves[j];
        mw.leak[k] = leak;
        mw.leak_margin[k] = std::max(0.0, mw.leak_cap - leak);
    }
    return mw;
}

RVector phase_leak_caps(const ChannelSet& cs, const Precoder& w0) {
    const double sqrt_n = std::sqrt(static_cast<double>(cs.dims.irs_elements));
    RVector cap = RVector::Ones(cs.dims.users);
    for (int k = 0; k < cs.dims.users; ++k) {
        for (int j = 0; j < cs.dims.eves; ++j) {
            const Complex direct = cs.direct_eves.col(j).dot(w0.w.col(k));
            const double reflected = (cs.cascade_eves[static_cast<std::size_t>(j)].adjoint() *
                                      w0.w.col(k)).norm();
            const double bound = std::abs(direct) + sqrt_n * reflected;
            cap[k] += bound * bound / cs.noise_eves[j];
        }
    }
    return cap;
}

MarginalPhi marginal_phi_components(const ChannelSet& cs, const Precoder& w0,
                                    const PhaseVector& phi) {
    const int users = cs.dims.users, eves = cs.dims.eves;
    const CMatrix h = effective_user_matrix(cs, phi);
    const CMatrix g = effective_eve_matrix(cs, phi);

    MarginalPhi mp;
    mp.signal = RVector::Zero(users);
    mp.interference = RVector::Zero(users);
    mp.leak = RVector::Zero(users);
    mp.leak_margin = RVector::Zero(users);
    mp.leak_cap = phase_leak_caps(cs, w0);

    for (int k = 0; k < users; ++k) {
        double interference = cs.noise_users[k];
        for (int i = 0; i < users; ++i) {
            const double p = std::norm(h.col(k).dot(w0.w.col(i)));
            if (i == k)
                mp.signal[k] = p;
            else
                interference += p;
        }
        mp.interference[k] = interference;

        double leak = 1.0;
        for (int j = 0; j < eves; ++j)
            leak += std::norm(g.col(j).dot(w0.w.col(k))) / cs.noise_eves[j];
        mp.leak[k] = leak;
        mp.leak_margin[k] = std::max(0.0, mp.leak_cap[k] - leak);
    }
    return mp;
}

RVector update_t(const MarginalW& mw) {
    return mw.signal.cwiseQuotient(mw.interference);
}

RVector update_alpha(const MarginalW& mw) {
    return mw.leak_margin.cwiseQuotient(mw.leak);
}

CVector update_beta(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi0,
                    const RVector& t, const Weights& weights, const Selector& b) {
    const int users = cs.dims.users;
    const CMatrix h = effective_user_matrix(cs, phi0);
    CVector beta = CVector::Zero(users);
    for (int k = 0; k < users; ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        double denom = cs.noise_users[k];
        for (int i = 0; i < users; ++i) denom += std::norm(h.col(k).dot(w.w.col(i)));
        const Complex numer =
            std::sqrt(weights.omega[k] * (1.0 + t[k])) * h.col(k).dot(w.w.col(k));
        beta[k] = numer / denom;
    }
    return beta;
}

CVector update_gamma(const MarginalW& mw, const Weights& weights, const Selector& b,
                     const RVector& alpha) {
    const int users = static_cast<int>(mw.signal.size());
    CVector gamma = CVector::Zero(users);
    for (int k = 0; k < users; ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        gamma[k] = std::sqrt(weights.omega[k] * (1.0 + alpha[k]) / mw.leak_cap) *
                   std::sqrt(mw.leak_margin[k]);
    }
    return gamma;
}

CVector update_f(const ChannelSet& cs, const Precoder& w0, const PhaseVector& phi,
                 const RVector& q, const Weights& weights, const Selector& b) {
    const int users = cs.dims.users;
    const CMatrix h = effective_user_matrix(cs, phi);
    CVector f = CVector::Zero(users);
    for (int k = 0; k < users; ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        double denom = cs.noise_users[k];
        for (int i = 0; i < users; ++i) denom += std::norm(h.col(k).dot(w0.w.col(i)));
        const Complex numer =
            std::sqrt(weights.omega[k] * (1.0 + q[k])) * h.col(k).dot(w0.w.col(k));
        f[k] = numer / denom;
    }
    return f;
}

std::pair<RVector, RVector> update_q_psi(const MarginalPhi& mp) {
    return {mp.signal.cwiseQuotient(mp.interference), mp.leak_margin.cwiseQuotient(mp.leak)};
}

CVector update_varpi(const MarginalPhi& mp, const Weights& weights, const Selector& b,
                     const RVector& psi) {
    const int users = static_cast<int>(mp.signal.size());
    CVector varpi = CVector::Zero(users);
    for (int k = 0; k < users; ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        varpi[k] = std::sqrt(weights.omega[k] * (1.0 + psi[k]) / mp.leak_cap[k]) *
                   std::sqrt(mp.leak_margin[k]);
    }
    return varpi;
}

Selector update_b(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi) {
    Selector b = Selector::all_zeros(cs.dims.users);
    for (int k = 0; k < cs.dims.users; ++k)
        b.on[static_cast<std::size_t>(k)] = sinr(cs, w, phi, k) > esnr(cs, w, phi, k) ? 1 : 0;
    return b;
}

namespace {

// Natural-log counterpart of xi; the dual stationarity conditions that yield
// the ratio-form aux updates hold exactly in these units.
double xi_nat(double x) {
    if (x < 0.0) throw NegativeInput("xi: negative argument");
    return std::log1p(x) - x;
}

}  // namespace

double dual_objective_w(const MarginalW& mw, const Weights& weights, const Selector& b,
                        const RVector& t, const RVector& alpha) {
    double total = 0.0;
    for (int k = 0; k < static_cast<int>(mw.signal.size()); ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        const double wk = weights.omega[k];
        total += wk * (xi_nat(t[k]) +
                       (1.0 + t[k]) * mw.signal[k] / (mw.signal[k] + mw.interference[k]));
        total += wk * (xi_nat(alpha[k]) + (1.0 + alpha[k]) * mw.leak_margin[k] / mw.leak_cap);
    }
    return total;
}

double dual_objective_phi(const MarginalPhi& mp, const Weights& weights, const Selector& b,
                          const RVector& q, const RVector& psi) {
    double total = 0.0;
    for (int k = 0; k < static_cast<int>(mp.signal.size()); ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        const double wk = weights.omega[k];
        total += wk * (xi_nat(q[k]) +
                       (1.0 + q[k]) * mp.signal[k] / (mp.signal[k] + mp.interference[k]));
        total += wk * (xi_nat(psi[k]) + (1.0 + psi[k]) * mp.leak_margin[k] / mp.leak_cap[k]);
    }
    return total;
}

double quad_objective_w(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi0,
                        const Weights& weights, const Selector& b, const RVector& t,
                        const RVector& alpha, const CVector& beta, const CVector& gamma) {
    const MarginalW mw = marginal_w_components(cs, w, phi0);
    const CMatrix h = effective_user_matrix(cs, phi0);
    double total = 0.0;
    for (int k = 0; k < cs.dims.users; ++k) {
        const double sel = b.on[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
        const Complex c_m = std::sqrt(sel * weights.omega[k] * (1.0 + t[k])) *
                            h.col(k).dot(w.w.col(k));
        const double d_m = mw.signal[k] + mw.interference[k];
        total += 2.0 * std::real(std::conj(beta[k]) * c_m) - std::norm(beta[k]) * d_m;
        const double c_e = std::sqrt(sel * weights.omega[k] * (1.0 + alpha[k]) / mw.leak_cap) *
                           std::sqrt(mw.leak_margin[k]);
        total += 2.0 * std::real(std::conj(gamma[k]) * c_e) - std::norm(gamma[k]);
    }
    return total;
}

double quad_objective_phi(const ChannelSet& cs, const Precoder& w0, const PhaseVector& phi,
                          const Weights& weights, const Selector& b, const RVector& q,
                          const RVector& psi, const CVector& f, const CVector& varpi) {
    const MarginalPhi mp = marginal_phi_components(cs, w0, phi);
    const CMatrix h = effective_user_matrix(cs, phi);
    double total = 0.0;
    for (int k = 0; k < cs.dims.users; ++k) {
        const double sel = b.on[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
        const Complex c_m = std::sqrt(sel * weights.omega[k] * (1.0 + q[k])) *
                            h.col(k).dot(w0.w.col(k));
        const double d_m = mp.signal[k] + mp.interference[k];
        total += 2.0 * std::real(std::conj(f[k]) * c_m) - std::norm(f[k]) * d_m;
        const double c_e = std::sqrt(sel * weights.omega[k] * (1.0 + psi[k]) / mp.leak_cap[k]) *
                           std::sqrt(mp.leak_margin[k]);
        total += 2.0 * std::real(std::conj(varpi[k]) * c_e) - std::norm(varpi[k]);
    }
    return total;
}

}  // namespace secbeam::fp
