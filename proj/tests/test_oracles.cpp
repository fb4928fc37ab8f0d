#include <doctest.h>

#include "oracles/oracles.hpp"
#include "test_support.hpp"

using namespace secbeam;
using testing::random_channels;
using testing::random_phases;
using testing::random_precoder;

TEST_SUITE("oracles") {

TEST_CASE("grid oracle refuses large surfaces") {
    Rng rng(90);
    const SystemDims dims{2, 3, 1, 0};
    const ChannelSet cs = random_channels(dims, rng);
    const Precoder w = random_precoder(dims, 1.0, rng);
    CHECK_THROWS_AS(
        oracles::grid_phase_oracle(cs, w, Selector::all_ones(1), Weights::uniform(1), 1.0),
        oracles::DimensionTooLarge);
}

TEST_CASE("grid oracle finds the analytic single-element alignment") {
    // N = 1, K = 1, J = 0: the optimum phase aligns the reflected copy with
    // the direct copy as seen through the beam, maximizing |z1 + conj(phi) z2|
    // for z1 = a^H w, z2 = c^H w.
    Rng rng(91);
    const SystemDims dims{3, 1, 1, 0};
    const ChannelSet cs = random_channels(dims, rng);
    const Precoder w = random_precoder(dims, 1.0, rng);
    const auto got =
        oracles::grid_phase_oracle(cs, w, Selector::all_ones(1), Weights::uniform(1), 0.25);

    const Complex z1 = (cs.direct_users.col(0).adjoint() * w.w.col(0)).value();
    const Complex z2 = (cs.cascade_users[0].col(0).adjoint() * w.w.col(0)).value();
    const Complex ideal = std::conj(z1) * z2 / (std::abs(z1) * std::abs(z2));
    CHECK(std::abs(got.best_phi.phi[0] - ideal) < 2.0 * M_PI * 0.25 / 360.0 + 1e-6);
}

TEST_CASE("halving the resolution never lowers the grid optimum") {
    Rng rng(92);
    const SystemDims dims{2, 2, 2, 1};
    const ChannelSet cs = random_channels(dims, rng);
    const Precoder w = random_precoder(dims, 1.0, rng);
    const Weights weights = Weights::uniform(2);
    const Selector b = Selector::all_ones(2);
    const auto coarse = oracles::grid_phase_oracle(cs, w, b, weights, 4.0);
    const auto fine = oracles::grid_phase_oracle(cs, w, b, weights, 2.0);
    CHECK(fine.best_value >= coarse.best_value - 1e-12);
    // Agreement within a grid-spacing-induced bound.
    CHECK(fine.best_value - coarse.best_value <= 0.2);
}

TEST_CASE("selector enumeration: single-user both cases and all-positive rates") {
    Rng rng(93);
    const SystemDims dims{3, 2, 1, 1};
    for (int trial = 0; trial < 10; ++trial) {
        const ChannelSet cs = random_channels(dims, rng);
        const PhaseVector phi = random_phases(2, rng);
        const Precoder w = random_precoder(dims, 1.0, rng);
        const Weights weights = Weights::uniform(1);
        const Selector best = oracles::exhaustive_b_oracle(cs, w, phi, weights);
        const double rate = detail::log2_ratio(sinr(cs, w, phi, 0), esnr(cs, w, phi, 0));
        CHECK(static_cast<bool>(best.on[0]) == (rate > 0.0));
    }

    const SystemDims noeve{3, 2, 3, 0};
    const ChannelSet cs = random_channels(noeve, rng);
    const Precoder w = random_precoder(noeve, 1.0, rng);
    const PhaseVector phi = random_phases(2, rng);
    const Selector best = oracles::exhaustive_b_oracle(cs, w, phi, Weights::uniform(3));
    CHECK(best == Selector::all_ones(3));  // no leakage: every rate positive
}

TEST_CASE("finite differences: quadratic, constant and analytic quadratic form") {
    auto square = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
    Eigen::VectorXd at(1);
    at << 3.0;
    CHECK(oracles::finite_diff_gradient(square, at)[0] == doctest::Approx(6.0).epsilon(1e-6));

    auto constant = [](const Eigen::VectorXd&) { return 4.2; };
    CHECK(oracles::finite_diff_gradient(constant, at)[0] == doctest::Approx(0.0));

    // phi^H U phi + 2 Re{phi^H v} parameterized by angles.
    Rng rng(94);
    const CMatrix b = testing::random_cmatrix(3, 3, rng);
    const CMatrix u = b.adjoint() * b;
    const CVector v = testing::random_cmatrix(3, 1, rng);
    auto objective = [&](const Eigen::VectorXd& theta) {
        CVector phi(3);
        for (int i = 0; i < 3; ++i) phi[i] = Complex(std::cos(theta[i]), -std::sin(theta[i]));
        return std::real(phi.dot(u * phi)) + 2.0 * std::real(phi.dot(v));
    };
    Eigen::VectorXd theta(3);
    theta << 0.3, 1.2, 4.0;
    const Eigen::VectorXd grad = oracles::finite_diff_gradient(objective, theta, 1e-6);
    // Analytic gradient: d phi_i / d theta_i = -j phi_i (for the e^{-j theta}
    // convention), so dQ/dtheta_i = 2 Re{ conj(dphi_i) * (U phi + v)_i }.
    CVector phi(3);
    for (int i = 0; i < 3; ++i) phi[i] = Complex(std::cos(theta[i]), -std::sin(theta[i]));
    const CVector residual = u * phi + v;
    for (int i = 0; i < 3; ++i) {
        const Complex dphi = Complex(0, -1) * phi[i];
        const double analytic = 2.0 * std::real(std::conj(dphi) * residual[i]);
        REQUIRE(grad[i] == doctest::Approx(analytic).epsilon(1e-5));
    }
}

TEST_CASE("jacobi eigenvalue oracle on a known spectrum") {
    Rng rng(95);
    // Build A = Q D Q^H from a random unitary (QR of a random matrix).
    const CMatrix m = testing::random_cmatrix(5, 5, rng);
    const Eigen::HouseholderQR<CMatrix> qr(m);
    const CMatrix q = qr.householderQ();
    RVector d(5);
    d << 0.3, 2.7, 1.1, 9.4, 5.5;
    const CMatrix a = q * d.asDiagonal() * q.adjoint();
    CHECK(oracles::jacobi_max_eigenvalue(a) == doctest::Approx(9.4).epsilon(1e-9));
}

}  // TEST_SUITE
