// Compares the OpenMP quadratic-form assembly against the serial reference
// and times the phase-tuner sweeps, across a range of surface sizes.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "secbeam/phase.hpp"
#include "secbeam/scenario.hpp"

using namespace secbeam;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%6s %14s %14s %10s %12s\n", "N", "serial_ms", "parallel_ms", "speedup",
                "max_rel_err");

    for (int n : {32, 64, 128, 256}) {
        scenario::ScenarioConfig sc;
        sc.dims = SystemDims{8, n, 4, 6};
        sc.seed = 7;
        Rng rng(sc.seed);
        const ChannelSet cs = scenario::sample_channels(sc, rng);
        const Weights weights = Weights::uniform(cs.dims.users);
        auto [w, phi, b] = optimizer::initialize(cs, sc.p_max(), 11);

        fp::AuxState aux = fp::AuxState::zeros(cs.dims.users);
        aux.b = b;
        const fp::MarginalPhi mp = fp::marginal_phi_components(cs, w, phi);
        std::tie(aux.q, aux.psi) = fp::update_q_psi(mp);
        aux.f = fp::update_f(cs, w, phi, aux.q, weights, b);

        const int reps = n <= 64 ? 50 : 10;
        phase::QuadraticForm ref, par;
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) ref = phase::build_quadratic_serial(cs, w, aux, weights);
        const double serial_ms = ms_since(t0) / reps;
        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) par = phase::build_quadratic(cs, w, aux, weights);
        const double parallel_ms = ms_since(t0) / reps;

        const double scale = ref.u.cwiseAbs().maxCoeff();
        const double err = (ref.u - par.u).cwiseAbs().maxCoeff() / (scale > 0 ? scale : 1.0);
        std::printf("%6d %14.3f %14.3f %9.2fx %12.3e\n", n, serial_ms, parallel_ms,
                    serial_ms / parallel_ms, err);
    }
    return 0;
}
