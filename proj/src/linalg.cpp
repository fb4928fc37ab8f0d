#include "secbeam/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace secbeam::linalg {

double hermitian_asymmetry(const CMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("hermitian check on non-square matrix");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

CMatrix require_hermitian(const CMatrix& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (hermitian_asymmetry(a) > 1e-10 * scale)
        throw NotHermitian("matrix is not Hermitian within tolerance");
    return 0.5 * (a + a.adjoint());
}

CVector solve_hpd(const CMatrix& a, const CVector& y) {
    if (a.rows() != y.size()) throw DimensionError("solve_hpd: size mismatch");
    const CMatrix h = require_hermitian(a);
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Cholesky factorization failed");
    CVector x = llt.solve(y);
    // One refinement step keeps the residual contract on ill-conditioned
    // systems such as Gamma_k with a vanishing power multiplier.
    x += llt.solve(y - h * x);
    return x;
}

namespace {

double power_iteration(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    CVector x = CVector::Ones(n) / std::sqrt(static_cast<double>(n));
    const double norm_h = h.cwiseAbs().maxCoeff() * static_cast<double>(n);
    if (norm_h == 0.0) return 0.0;
    double lambda = 0.0;
    const int cap = 10000;
    for (int it = 0; it < cap; ++it) {
        CVector y = h * x;
        const double ny = y.norm();
        if (ny == 0.0) return 0.0;
        x = y / ny;
        lambda = std::real(x.dot(h * x));
        const double resid = (h * x - lambda * x).norm();
        if (resid <= 1e-10 * std::max(lambda, norm_h * 1e-14)) return std::max(lambda, 0.0);
    }
    throw NoConvergence("power iteration hit the iteration cap");
}

}  // namespace

double max_eigenvalue(const CMatrix& a) {
    const CMatrix h = require_hermitian(a);
    if (h.rows() == 0) return 0.0;
    if (h.rows() <= 64) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NoConvergence("eigenvalue solver failed");
        return std::max(es.eigenvalues().maxCoeff(), 0.0);
    }
    return power_iteration(h);
}

double bisect(const std::function<double(double)>& f, double target, double lo,
              double hi, double tol) {
    if (!(lo <= hi)) throw BracketInvalid("bisect: empty interval");
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo >= target && target >= fhi))
        throw BracketInvalid("bisect: target outside [f(hi), f(lo)]");
    if (std::abs(flo - target) <= tol) return lo;
    if (std::abs(fhi - target) <= tol) return hi;
    const double width_floor = 1e-12 * (1.0 + std::abs(hi));
    double mid = 0.5 * (lo + hi);
    while (hi - lo > width_floor) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm - target) <= tol) return mid;
        if (fm >= target)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

}  // namespace secbeam::linalg
