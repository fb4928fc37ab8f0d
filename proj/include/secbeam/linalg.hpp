#ifndef SECBEAM_LINALG_HPP
#define SECBEAM_LINALG_HPP

#include <functional>

#include "secbeam/types.hpp"

namespace secbeam::linalg {

/// Worst elementwise |A - A^H| entry.
double hermitian_asymmetry(const CMatrix& a);

/// Throws NotHermitian unless the asymmetry stays within 1e-10 of the matrix
/// scale; returns the symmetrized (A + A^H)/2.
CMatrix require_hermitian(const CMatrix& a);

/// Solves A x = y for Hermitian positive-definite A via Cholesky with one
/// refinement step. Throws NotHermitian / NotPositiveDefinite.
CVector solve_hpd(const CMatrix& a, const CVector& y);

/// Largest eigenvalue of a Hermitian PSD matrix. Full decomposition up to
/// 64x64, power iteration with an all-ones start above that (cap 10000,
/// NoConvergence past the cap). Result clamped at zero.
double max_eigenvalue(const CMatrix& a);

/// Finds x in [lo, hi] with |f(x) - target| <= tol for a monotone
/// non-increasing f, or the midpoint of a bracket narrower than
/// 1e-12*(1+hi). Requires f(lo) >= target >= f(hi), else BracketInvalid.
/// A degenerate bracket (f(lo) == target) returns lo.
double bisect(const std::function<double(double)>& f, double target, double lo,
              double hi, double tol);

}  // namespace secbeam::linalg

#endif
