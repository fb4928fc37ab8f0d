#include "oracles/oracles.hpp"

#include <cmath>
#include <vector>

namespace secbeam::oracles {

GridResult grid_min_oracle(int elements, double resolution_deg,
                           const std::function<double(const PhaseVector&)>& objective) {
    if (elements < 1 || elements > 2)
        throw DimensionTooLarge("grid oracle supports one or two elements only");
    const int steps = static_cast<int>(std::lround(360.0 / resolution_deg));
    const double dtheta = 2.0 * M_PI / steps;

    PhaseVector phi = PhaseVector::all_ones(elements);
    GridResult best;
    bool first = true;
    const int inner = elements == 2 ? steps : 1;
    for (int i = 0; i < steps; ++i) {
        phi.phi[0] = Complex(std::cos(i * dtheta), -std::sin(i * dtheta));
        for (int j = 0; j < inner; ++j) {
            if (elements == 2)
                phi.phi[1] = Complex(std::cos(j * dtheta), -std::sin(j * dtheta));
            const double v = objective(phi);
            if (first || v < best.best_value) {
                best.best_value = v;
                best.best_phi = phi;
                first = false;
            }
        }
    }
    return best;
}

GridResult grid_phase_oracle(const ChannelSet& cs, const Precoder& w, const Selector& b,
                             const Weights& weights, double resolution_deg) {
    GridResult res = grid_min_oracle(
        cs.dims.irs_elements, resolution_deg,
        [&](const PhaseVector& phi) { return -wssr_q(cs, w, phi, weights, b); });
    res.best_value = -res.best_value;
    return res;
}

Selector exhaustive_b_oracle(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi,
                             const Weights& weights) {
    const int users = cs.dims.users;
    if (users > 12) throw DimensionTooLarge("selector enumeration supports at most 12 users");
    Selector best = Selector::all_zeros(users);
    double best_value = wssr_q(cs, w, phi, weights, best);
    for (unsigned mask = 1; mask < (1u << users); ++mask) {
        Selector cand = Selector::all_zeros(users);
        for (int k = 0; k < users; ++k) cand.on[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
        const double v = wssr_q(cs, w, phi, weights, cand);
        if (v > best_value) {
            best_value = v;
            best = cand;
        }
    }
    return best;
}

Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& point, double step) {
    Eigen::VectorXd grad(point.size());
    Eigen::VectorXd x = point;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        const double h = step * (1.0 + std::abs(point[i]));
        x[i] = point[i] + h;
        const double fp = f(x);
        x[i] = point[i] - h;
        const double fm = f(x);
        x[i] = point[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

double jacobi_max_eigenvalue(const CMatrix& a) {
    CMatrix m = 0.5 * (a + a.adjoint());
    const Eigen::Index n = m.rows();
    if (n == 1) return m(0, 0).real();

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(m(p, q));
        const double scale = m.cwiseAbs().maxCoeff();
        if (scale == 0.0 || off <= 1e-28 * scale * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = m(p, q);
                if (std::abs(apq) == 0.0) continue;
                // Unitary 2x2 rotation annihilating m(p,q): first strip the
                // phase of the off-diagonal entry, then a real Jacobi angle.
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                const Complex phase = apq / std::abs(apq);
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = t * c * phase;

                for (Eigen::Index i = 0; i < n; ++i) {
                    const Complex mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - std::conj(s) * miq;
                    m(i, q) = s * mip + c * miq;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    const Complex mpi = m(p, i), mqi = m(q, i);
                    m(p, i) = c * mpi - s * mqi;
                    m(q, i) = std::conj(s) * mpi + c * mqi;
                }
            }
        }
    }
    double best = m(0, 0).real();
    for (Eigen::Index i = 1; i < n; ++i) best = std::max(best, m(i, i).real());
    return best;
}

}  // namespace secbeam::oracles
