#include <doctest.h>

#include "oracles/oracles.hpp"
#include "secbeam/fp.hpp"
#include "test_support.hpp"

using namespace secbeam;
using testing::random_channels;
using testing::random_cmatrix;
using testing::random_phases;
using testing::random_precoder;

namespace {

struct Instance {
    ChannelSet cs;
    PhaseVector phi;
    Precoder w;
    Weights weights;
    Selector b;
};

Instance random_instance(Rng& rng, SystemDims dims = {4, 5, 3, 2}, double p_max = 1.5) {
    Instance inst{random_channels(dims, rng), random_phases(dims.irs_elements, rng),
                  random_precoder(dims, p_max, rng), Weights::uniform(dims.users),
                  Selector::all_ones(dims.users)};
    return inst;
}

}  // namespace

TEST_SUITE("fp") {

TEST_CASE("xi closed values and domain") {
    CHECK(fp::xi(0.0) == 0.0);
    CHECK(fp::xi(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fp::xi(3.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(fp::xi(-0.5), NegativeInput);
}

TEST_CASE("xi has zeros exactly at 0 and 1 and is negative past 1") {
    // In bits, log2(1+x) lies above x on (0,1) and below it beyond 1; the two
    // crossings are the only zeros.
    for (int i = 0; i <= 400; ++i) {
        const double x = i * 0.025;
        const double v = fp::xi(x);
        if (std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12) {
            REQUIRE(std::abs(v) <= 1e-12);
        } else if (x < 1.0) {
            REQUIRE(v > 0.0);
        } else {
            REQUIRE(v < 0.0);
        }
    }
}

TEST_CASE("precoder marginals: silent stream") {
    Rng rng(30);
    Instance inst = random_instance(rng);
    inst.w.w.col(0).setZero();
    const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
    CHECK(mw.signal[0] == 0.0);
    CHECK(mw.leak[0] == 1.0);
    CHECK(mw.leak_margin[0] == doctest::Approx(mw.leak_cap - 1.0));
}

TEST_CASE("precoder marginals without eavesdroppers") {
    Rng rng(31);
    Instance inst{random_channels({4, 5, 3, 0}, rng), random_phases(5, rng),
                  random_precoder({4, 5, 3, 0}, 1.0, rng), Weights::uniform(3),
                  Selector::all_ones(3)};
    const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
    for (int k = 0; k < 3; ++k) {
        CHECK(mw.leak[k] == 1.0);
        CHECK(mw.leak_margin[k] == 0.0);
    }
    CHECK(mw.leak_cap == 1.0);
}

TEST_CASE("precoder leakage margin stays non-negative against the Frobenius oracle") {
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
        // Independent recomputation of the cap from raw sums.
        double frob = 0.0;
        for (int j = 0; j < inst.cs.dims.eves; ++j) {
            const CVector g = effective_eve_channel(inst.cs, j, inst.phi);
            for (int m = 0; m < inst.cs.dims.tx_antennas; ++m)
                frob += std::norm(g[m]) / inst.cs.noise_eves[j];
        }
        const double cap = 1.0 + frob * inst.w.p_max;
        REQUIRE(mw.leak_cap == doctest::Approx(cap).epsilon(1e-12));
        for (int k = 0; k < inst.cs.dims.users; ++k) {
            REQUIRE(mw.leak_margin[k] >= 0.0);
            REQUIRE(mw.leak[k] <= cap * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("phase marginals without eavesdroppers") {
    Rng rng(33);
    const SystemDims dims{4, 5, 3, 0};
    Instance inst{random_channels(dims, rng), random_phases(5, rng),
                  random_precoder(dims, 1.0, rng), Weights::uniform(3), Selector::all_ones(3)};
    const fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, inst.phi);
    for (int k = 0; k < 3; ++k) {
        CHECK(mp.leak[k] == 1.0);
        CHECK(mp.leak_cap[k] == 1.0);
        CHECK(mp.leak_margin[k] == 0.0);
    }
}

TEST_CASE("phase leakage cap is tight when the reflected eve path vanishes") {
    Rng rng(34);
    const SystemDims dims{3, 4, 2, 2};
    ChannelSet base = random_channels(dims, rng);
    // Zero IRS-side eavesdropper links: the triangle bound collapses.
    ChannelSet cs = ChannelSet::assemble(dims, base.direct_users, base.direct_eves, base.bs_irs,
                                         base.irs_users, CMatrix::Zero(4, 2), base.noise_users,
                                         base.noise_eves);
    const Precoder w = random_precoder(dims, 1.0, rng);
    for (int trial = 0; trial < 10; ++trial) {
        const PhaseVector phi = random_phases(4, rng);
        const fp::MarginalPhi mp = fp::marginal_phi_components(cs, w, phi);
        for (int k = 0; k < dims.users; ++k)
            CHECK(mp.leak_cap[k] == doctest::Approx(mp.leak[k]).epsilon(1e-12));
    }
}

TEST_CASE("phase leakage stays below the cap over many random phases") {
    Rng rng(35);
    Instance inst = random_instance(rng);
    for (int trial = 0; trial < 1000; ++trial) {
        const PhaseVector phi = random_phases(inst.cs.dims.irs_elements, rng);
        const fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, phi);
        for (int k = 0; k < inst.cs.dims.users; ++k)
            REQUIRE(mp.leak[k] <= mp.leak_cap[k] * (1.0 + 1e-12));
    }
}

TEST_CASE("t update is the per-user ratio and the marginal maximizer") {
    Rng rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
        const RVector t = fp::update_t(mw);
        const RVector alpha = fp::update_alpha(mw);
        for (int k = 0; k < 3; ++k)
            REQUIRE(t[k] == doctest::Approx(sinr(inst.cs, inst.w, inst.phi, k)).epsilon(1e-12));

        const double base = fp::dual_objective_w(mw, inst.weights, inst.b, t, alpha);
        for (int p = 0; p < 20; ++p) {
            RVector tp = t;
            const int k = static_cast<int>(rng.raw() % 3);
            tp[k] = std::max(0.0, tp[k] + (rng.uniform() < 0.5 ? -0.01 : 0.01) * (1.0 + tp[k]));
            REQUIRE(fp::dual_objective_w(mw, inst.weights, inst.b, tp, alpha) <= base + 1e-12);
            RVector ap = alpha;
            ap[k] = std::max(0.0, ap[k] + (rng.uniform() < 0.5 ? -0.01 : 0.01) * (1.0 + ap[k]));
            REQUIRE(fp::dual_objective_w(mw, inst.weights, inst.b, t, ap) <= base + 1e-12);
        }
    }
}

TEST_CASE("t update zero cases") {
    Rng rng(37);
    Instance inst = random_instance(rng);
    inst.w.w.col(1).setZero();
    const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
    CHECK(fp::update_t(mw)[1] == 0.0);
}

TEST_CASE("beta update closed single-user arithmetic") {
    // omega = 1, b = 1, h^H w = 1, sigma^2 = 1: t = 1, C = sqrt(2), D = 2.
    SystemDims dims{1, 1, 1, 0};
    ChannelSet cs = ChannelSet::assemble(dims, CMatrix::Ones(1, 1), CMatrix(1, 0),
                                         CMatrix::Zero(1, 1), CMatrix::Zero(1, 1), CMatrix(1, 0),
                                         RVector::Ones(1), RVector(0));
    Precoder w;
    w.p_max = 2.0;
    w.w = CMatrix::Ones(1, 1);
    const fp::MarginalW mw = fp::marginal_w_components(cs, w, PhaseVector::all_ones(1));
    const RVector t = fp::update_t(mw);
    CHECK(t[0] == doctest::Approx(1.0));
    const CVector beta = fp::update_beta(cs, w, PhaseVector::all_ones(1), t,
                                         Weights::uniform(1), Selector::all_ones(1));
    CHECK(std::abs(beta[0] - Complex(std::sqrt(2.0) / 2.0, 0)) < 1e-12);
}

TEST_CASE("beta and gamma vanish for deselected users") {
    Rng rng(38);
    Instance inst = random_instance(rng);
    inst.b.on = {1, 0, 1};
    const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
    const RVector t = fp::update_t(mw);
    const RVector alpha = fp::update_alpha(mw);
    const CVector beta = fp::update_beta(inst.cs, inst.w, inst.phi, t, inst.weights, inst.b);
    const CVector gamma = fp::update_gamma(mw, inst.weights, inst.b, alpha);
    CHECK(beta[1] == Complex(0, 0));
    CHECK(gamma[1] == Complex(0, 0));
    CHECK(std::abs(beta[0]) > 0.0);
}

TEST_CASE("gamma vanishes when the margin is exhausted") {
    Rng rng(39);
    Instance inst = random_instance(rng);
    fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
    mw.leak_margin.setZero();
    const RVector alpha = fp::update_alpha(mw);
    const CVector gamma = fp::update_gamma(mw, inst.weights, inst.b, alpha);
    for (int k = 0; k < 3; ++k) CHECK(gamma[k] == Complex(0, 0));
}

TEST_CASE("beta and gamma are the quadratic marginal maximizers") {
    Rng rng(40);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalW mw = fp::marginal_w_components(inst.cs, inst.w, inst.phi);
        const RVector t = fp::update_t(mw);
        const RVector alpha = fp::update_alpha(mw);
        const CVector beta = fp::update_beta(inst.cs, inst.w, inst.phi, t, inst.weights, inst.b);
        const CVector gamma = fp::update_gamma(mw, inst.weights, inst.b, alpha);
        const double base = fp::quad_objective_w(inst.cs, inst.w, inst.phi, inst.weights, inst.b,
                                                 t, alpha, beta, gamma);
        for (int p = 0; p < 50; ++p) {
            CVector bp = beta;
            const int k = static_cast<int>(rng.raw() % 3);
            bp[k] += 0.01 * Complex(rng.normal(), rng.normal());
            REQUIRE(fp::quad_objective_w(inst.cs, inst.w, inst.phi, inst.weights, inst.b, t,
                                         alpha, bp, gamma) <= base + 1e-12);
            CVector gp = gamma;
            gp[k] += 0.01 * Complex(rng.normal(), rng.normal());
            REQUIRE(fp::quad_objective_w(inst.cs, inst.w, inst.phi, inst.weights, inst.b, t,
                                         alpha, beta, gp) <= base + 1e-12);
        }
    }
}

TEST_CASE("f update mirrors beta on the phase problem") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, inst.phi);
        const auto [q, psi] = fp::update_q_psi(mp);
        const CVector f = fp::update_f(inst.cs, inst.w, inst.phi, q, inst.weights, inst.b);
        const CVector varpi = fp::update_varpi(mp, inst.weights, inst.b, psi);
        const double base = fp::quad_objective_phi(inst.cs, inst.w, inst.phi, inst.weights,
                                                   inst.b, q, psi, f, varpi);
        for (int p = 0; p < 20; ++p) {
            CVector fpert = f;
            const int k = static_cast<int>(rng.raw() % 3);
            fpert[k] += 0.01 * Complex(rng.normal(), rng.normal());
            REQUIRE(fp::quad_objective_phi(inst.cs, inst.w, inst.phi, inst.weights, inst.b, q,
                                           psi, fpert, varpi) <= base + 1e-12);
        }
        Selector off = Selector::all_zeros(3);
        CHECK(fp::update_f(inst.cs, inst.w, inst.phi, q, inst.weights, off).norm() == 0.0);
    }
}

TEST_CASE("q and psi updates are ratios and dual maximizers") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, inst.phi);
        const auto [q, psi] = fp::update_q_psi(mp);
        for (int k = 0; k < 3; ++k) {
            REQUIRE(q[k] == doctest::Approx(sinr(inst.cs, inst.w, inst.phi, k)).epsilon(1e-12));
            REQUIRE(psi[k] == doctest::Approx(mp.leak_margin[k] / mp.leak[k]));
        }
        const double base = fp::dual_objective_phi(mp, inst.weights, inst.b, q, psi);
        for (int p = 0; p < 20; ++p) {
            RVector qp = q;
            const int k = static_cast<int>(rng.raw() % 3);
            qp[k] = std::max(0.0, qp[k] + (rng.uniform() < 0.5 ? -0.01 : 0.01) * (1.0 + qp[k]));
            REQUIRE(fp::dual_objective_phi(mp, inst.weights, inst.b, qp, psi) <= base + 1e-12);
            RVector pp = psi;
            pp[k] = std::max(0.0, pp[k] + (rng.uniform() < 0.5 ? -0.01 : 0.01) * (1.0 + pp[k]));
            REQUIRE(fp::dual_objective_phi(mp, inst.weights, inst.b, q, pp) <= base + 1e-12);
        }
    }
}

TEST_CASE("psi vanishes with the margin") {
    Rng rng(43);
    Instance inst = random_instance(rng);
    fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, inst.phi);
    mp.leak_margin.setZero();
    const auto [q, psi] = fp::update_q_psi(mp);
    (void)q;
    CHECK(psi.norm() == 0.0);
}

TEST_CASE("selector update uses the strict comparison") {
    Rng rng(44);
    Instance inst = random_instance(rng);
    const Selector b = fp::update_b(inst.cs, inst.w, inst.phi);
    for (int k = 0; k < 3; ++k) {
        const bool expect = sinr(inst.cs, inst.w, inst.phi, k) > esnr(inst.cs, inst.w, inst.phi, k);
        CHECK(static_cast<bool>(b.on[static_cast<std::size_t>(k)]) == expect);
    }
}

TEST_CASE("selector ties deactivate the user") {
    // No eavesdroppers and a silent stream: SINR = ESNR = 0 -> off.
    Rng rng(45);
    const SystemDims dims{3, 2, 2, 0};
    const ChannelSet cs = random_channels(dims, rng);
    Precoder w;
    w.p_max = 1.0;
    w.w = CMatrix::Zero(3, 2);
    const Selector b = fp::update_b(cs, w, PhaseVector::all_ones(2));
    CHECK(b.none_active());
}

TEST_CASE("selector matches the exhaustive enumeration oracle") {
    Rng rng(46);
    const SystemDims dims{4, 3, 3, 2};
    const Weights weights = Weights::uniform(3);
    for (int trial = 0; trial < 200; ++trial) {
        const ChannelSet cs = random_channels(dims, rng);
        const PhaseVector phi = random_phases(3, rng);
        const Precoder w = random_precoder(dims, 1.0, rng);
        const Selector best = oracles::exhaustive_b_oracle(cs, w, phi, weights);
        const Selector b = fp::update_b(cs, w, phi);
        const double vb = wssr_q(cs, w, phi, weights, b);
        const double vbest = wssr_q(cs, w, phi, weights, best);
        REQUIRE(std::abs(vb - vbest) <= 1e-12 * std::max(1.0, std::abs(vbest)));
    }
}

TEST_CASE("clamp magnitude never exceeds the stated bound on valid inputs") {
    Rng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng);
        const fp::MarginalPhi mp = fp::marginal_phi_components(inst.cs, inst.w, inst.phi);
        for (int k = 0; k < 3; ++k) {
            const double raw = mp.leak_cap[k] - mp.leak[k];
            if (raw < 0.0) REQUIRE(-raw <= 1e-9 * mp.leak_cap[k]);
        }
    }
}

}  // TEST_SUITE
