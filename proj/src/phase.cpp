#include "secbeam/phase.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "secbeam/linalg.hpp"

namespace secbeam::phase {

namespace {

constexpr double kMonotoneSlack = 1e-9;
constexpr double kDegenerate = 1e-300;

struct AssemblyTerms {
    std::vector<CMatrix> scaled_user_grams;  // |f_k|^2 * (W0 W0^H) H_k per active user
    std::vector<const CMatrix*> user_cascades;
    CMatrix scaled_eve_cols;  // sqrt(kappa_k / mu_j^2) * G_j^H w_0k stacked as columns
    CVector v;
};

/// Shared front end of both assembly paths: per-user scaled products, the
/// scaled eavesdropper columns, and the full linear term v.
AssemblyTerms prepare_terms(const ChannelSet& cs, const Precoder& w0, const fp::AuxState& aux,
                            const Weights& weights, RVector& kappa, CVector& eta) {
    const int n = cs.dims.irs_elements;
    const int users = cs.dims.users, eves = cs.dims.eves;

    const RVector leak_cap = fp::phase_leak_caps(cs, w0);
    kappa = RVector::Zero(users);
    eta = CVector::Zero(users);
    for (int k = 0; k < users; ++k) {
        const double wk = aux.b.on[static_cast<std::size_t>(k)] ? weights.omega[k] : 0.0;
        kappa[k] = wk * (1.0 + aux.psi[k]) / leak_cap[k];
        eta[k] = std::conj(aux.f[k]) * std::sqrt(wk * (1.0 + aux.q[k]));
    }

    AssemblyTerms terms;
    terms.v = CVector::Zero(n);

    const CMatrix gram = w0.w * w0.w.adjoint();  // M x M
    for (int k = 0; k < users; ++k) {
        const double fk2 = std::norm(aux.f[k]);
        const CMatrix& cascade = cs.cascade_users[static_cast<std::size_t>(k)];
        if (fk2 > 0.0) {
            terms.scaled_user_grams.push_back(fk2 * (gram * cascade));
            terms.user_cascades.push_back(&cascade);
            terms.v += cascade.adjoint() * (fk2 * (gram * cs.direct_users.col(k)));
        }
        if (eta[k] != Complex(0.0, 0.0))
            terms.v -= eta[k] * (cascade.adjoint() * w0.w.col(k));
    }

    int active_eve_terms = 0;
    for (int k = 0; k < users; ++k)
        if (kappa[k] > 0.0) active_eve_terms += eves;
    terms.scaled_eve_cols = CMatrix(n, active_eve_terms);
    int col = 0;
    for (int k = 0; k < users; ++k) {
        if (kappa[k] <= 0.0) continue;
        for (int j = 0; j < eves; ++j) {
            const CMatrix& cascade = cs.cascade_eves[static_cast<std::size_t>(j)];
            const CVector y = cascade.adjoint() * w0.w.col(k);
            const double scale = kappa[k] / cs.noise_eves[j];
            terms.scaled_eve_cols.col(col++) = std::sqrt(scale) * y;
            terms.v += scale * y * std::conj(cs.direct_eves.col(j).dot(w0.w.col(k)));
        }
    }
    return terms;
}

QuadraticForm finish(AssemblyTerms terms, RVector kappa, CVector eta, CMatrix u) {
    u = 0.5 * (u + u.adjoint());
    QuadraticForm qf;
    qf.lambda_max = linalg::max_eigenvalue(u);
    qf.u = std::move(u);
    qf.v = std::move(terms.v);
    qf.kappa = std::move(kappa);
    qf.eta = std::move(eta);
    return qf;
}

}  // namespace

QuadraticForm build_quadratic_serial(const ChannelSet& cs, const Precoder& w0,
                                     const fp::AuxState& aux, const Weights& weights) {
    const int n = cs.dims.irs_elements;
    RVector kappa;
    CVector eta;
    AssemblyTerms terms = prepare_terms(cs, w0, aux, weights, kappa, eta);

    CMatrix u = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < terms.scaled_user_grams.size(); ++i)
        u += terms.user_cascades[i]->adjoint() * terms.scaled_user_grams[i];
    if (terms.scaled_eve_cols.cols() > 0)
        u += terms.scaled_eve_cols * terms.scaled_eve_cols.adjoint();
    return finish(std::move(terms), std::move(kappa), std::move(eta), std::move(u));
}

QuadraticForm build_quadratic(const ChannelSet& cs, const Precoder& w0,
                              const fp::AuxState& aux, const Weights& weights) {
    const int n = cs.dims.irs_elements;
    RVector kappa;
    CVector eta;
    AssemblyTerms terms = prepare_terms(cs, w0, aux, weights, kappa, eta);

    CMatrix u = CMatrix::Zero(n, n);
    // Fixed-size row blocks, each written by exactly one task: the assembled
    // matrix does not depend on the thread count.
    constexpr int kBlock = 16;
    const int blocks = (n + kBlock - 1) / kBlock;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= 64)
#endif
    for (int bi = 0; bi < blocks; ++bi) {
        const int r0 = bi * kBlock;
        const int len = std::min(kBlock, n - r0);
        auto rows = u.middleRows(r0, len);
        for (std::size_t i = 0; i < terms.scaled_user_grams.size(); ++i)
            rows += terms.user_cascades[i]->middleCols(r0, len).adjoint() *
                    terms.scaled_user_grams[i];
        if (terms.scaled_eve_cols.cols() > 0)
            rows += terms.scaled_eve_cols.middleRows(r0, len) * terms.scaled_eve_cols.adjoint();
    }
    return finish(std::move(terms), std::move(kappa), std::move(eta), std::move(u));
}

double quadratic_value(const QuadraticForm& qf, const PhaseVector& phi) {
    return std::real(phi.phi.dot(qf.u * phi.phi)) + 2.0 * std::real(phi.phi.dot(qf.v));
}

PhaseVector aligned_start(const QuadraticForm& qf) {
    PhaseVector phi;
    phi.phi = CVector(qf.v.size());
    for (Eigen::Index i = 0; i < qf.v.size(); ++i) {
        const double mag = std::abs(qf.v[i]);
        phi.phi[i] = mag < kDegenerate ? Complex(1.0, 0.0) : -qf.v[i] / mag;
    }
    return phi;
}

namespace {

void renormalize_into(Complex direction, Complex previous, Complex& out) {
    const double mag = std::abs(direction);
    out = mag < kDegenerate ? previous : -direction / mag;
}

}  // namespace

PhaseVector mm_tune(const QuadraticForm& qf, const PhaseVector& phi0, int max_iter,
                    double rel_tol, SweepMode mode) {
    const Eigen::Index n = phi0.phi.size();
    // A hair above the estimate so a power-iteration value marginally below
    // the true top eigenvalue still majorizes.
    const double shift = qf.lambda_max * (1.0 + 1e-9);
    PhaseVector phi = phi0;
    double prev = quadratic_value(qf, phi);
    for (int it = 0; it < max_iter; ++it) {
        if (mode == SweepMode::Snapshot) {
            const CVector direction = qf.u * phi.phi + qf.v - shift * phi.phi;
            for (Eigen::Index i = 0; i < n; ++i)
                renormalize_into(direction[i], phi.phi[i], phi.phi[i]);
        } else {
            for (Eigen::Index i = 0; i < n; ++i) {
                const Complex d =
                    (qf.u.row(i) * phi.phi).value() + qf.v[i] - shift * phi.phi[i];
                renormalize_into(d, phi.phi[i], phi.phi[i]);
            }
        }
        const double cur = quadratic_value(qf, phi);
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) break;
        prev = cur;
    }
    return phi;
}

PhaseVector bcd_tune(const QuadraticForm& qf, const PhaseVector& phi0, int max_iter,
                     double rel_tol, SweepMode mode) {
    const Eigen::Index n = phi0.phi.size();
    PhaseVector phi = phi0;
    double prev = quadratic_value(qf, phi);
    for (int it = 0; it < max_iter; ++it) {
        if (mode == SweepMode::InPlace) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const Complex row_dot = (qf.u.row(i) * phi.phi).value();
                const Complex a = qf.v[i] + row_dot - qf.u(i, i) * phi.phi[i];
                renormalize_into(a, phi.phi[i], phi.phi[i]);
            }
        } else {
            const CVector row_dots = qf.u * phi.phi;
            for (Eigen::Index i = 0; i < n; ++i) {
                const Complex a = qf.v[i] + row_dots[i] - qf.u(i, i) * phi.phi[i];
                renormalize_into(a, phi.phi[i], phi.phi[i]);
            }
        }
        const double cur = quadratic_value(qf, phi);
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) break;
        prev = cur;
    }
    return phi;
}

std::pair<PhaseVector, std::vector<double>> inner_loop_a2(
    const ChannelSet& cs, const Precoder& w, const Selector& b, const Weights& weights,
    const PhaseVector& phi_init, Tuner tuner, int tuner_max_iter, double tuner_rel_tol,
    int max_iter, double rel_tol) {
    PhaseVector phi = phi_init;
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(std::max(max_iter, 0)));
    double prev = wssr_q(cs, w, phi, weights, b);
    for (int it = 0; it < max_iter; ++it) {
        const fp::MarginalPhi mp = fp::marginal_phi_components(cs, w, phi);
        fp::AuxState aux = fp::AuxState::zeros(cs.dims.users);
        aux.b = b;
        auto [q, psi] = fp::update_q_psi(mp);
        aux.q = std::move(q);
        aux.psi = std::move(psi);
        aux.f = fp::update_f(cs, w, phi, aux.q, weights, b);
        const QuadraticForm qf = build_quadratic(cs, w, aux, weights);
        phi = tuner == Tuner::MM ? mm_tune(qf, phi, tuner_max_iter, tuner_rel_tol)
                                 : bcd_tune(qf, phi, tuner_max_iter, tuner_rel_tol);

        const double cur = wssr_q(cs, w, phi, weights, b);
        trace.push_back(cur);
        if (cur < prev - kMonotoneSlack)
            throw MonotonicityViolation("inner phase loop decreased the objective");
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) break;
        prev = cur;
    }
    return {phi, trace};
}

}  // namespace secbeam::phase
