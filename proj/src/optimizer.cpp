#include "secbeam/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "secbeam/rng.hpp"

namespace secbeam::optimizer {

namespace {

constexpr double kMonotoneSlack = 1e-9;

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

void OptimizerConfig::validate() const {
    if (outer_rel_tol < 0.0 || inner_rel_tol < 0.0 || tuner_rel_tol < 0.0)
        throw ConfigError("optimizer tolerances must be non-negative");
    if (outer_max_iter < 1 || inner_max_iter_a1 < 1 || inner_max_iter_a2 < 1 ||
        tuner_max_iter < 1)
        throw ConfigError("optimizer iteration budgets must be positive");
}

OptimizerConfig OptimizerConfig::effective() const {
    OptimizerConfig cfg = *this;
    if (cfg.mode == Mode::SingleLoop) {
        cfg.inner_max_iter_a1 = 1;
        cfg.inner_max_iter_a2 = 1;
        cfg.tuner_max_iter = 1;
    }
    return cfg;
}

double RunTrace::total_ms() const {
    double total = 0.0;
    for (double t : wall_ms) total += t;
    return total;
}

void RunTrace::write_csv(std::ostream& out) const {
    out << "iter,wssr,wssr_q,wall_ms\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "0,%.12g,%.12g,0\n", initial_objective, initial_objective);
    out << buf;
    for (std::size_t i = 0; i < objective.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g\n", i + 1, objective[i],
                      objective_q[i], wall_ms[i]);
        out << buf;
    }
}

void RunTrace::write_summary(std::ostream& out) const {
    char buf[160];
    out << "iterations = " << objective.size() << "\n";
    out << "converged = " << (converged ? "true" : "false") << "\n";
    std::snprintf(buf, sizeof(buf), "initial_wssr = %.12g\n", initial_objective);
    out << buf;
    std::snprintf(buf, sizeof(buf), "final_wssr = %.12g\n", final_objective());
    out << buf;
    std::snprintf(buf, sizeof(buf), "final_wssr_q = %.12g\n",
                  objective_q.empty() ? initial_objective : objective_q.back());
    out << buf;
    std::snprintf(buf, sizeof(buf), "total_ms = %.12g\n", total_ms());
    out << buf;
    int active = 0;
    for (auto v : final_b.on) active += v;
    out << "active_users = " << active << " of " << final_b.size() << "\n";
}

std::tuple<Precoder, PhaseVector, Selector> initialize(const ChannelSet& cs, double p_max,
                                                       std::uint64_t seed) {
    Rng rng(seed);
    PhaseVector phi;
    phi.phi = CVector(cs.dims.irs_elements);
    for (int n = 0; n < cs.dims.irs_elements; ++n) {
        const double theta = rng.angle();
        phi.phi[n] = Complex(std::cos(theta), -std::sin(theta));
    }

    // Matched-filter beams, projected onto the orthogonal complement of the
    // eavesdropper channels when one exists. Plain matched beams at these
    // leakage levels start every user at zero secrecy rate, and the strict
    // selector update then freezes the whole run; the projection starts the
    // alternation inside a basin with positive selected rates.
    Precoder w;
    w.p_max = p_max;
    w.w = effective_user_matrix(cs, phi);
    if (cs.dims.eves > 0 && cs.dims.eves < cs.dims.tx_antennas) {
        const CMatrix g = effective_eve_matrix(cs, phi);
        Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(g.adjoint());
        const CMatrix projected =
            w.w - cod.pseudoInverse() * (g.adjoint() * w.w);
        if (projected.squaredNorm() > 1e-24 * w.w.squaredNorm()) w.w = projected;
    }
    const double norm2 = w.w.squaredNorm();
    if (norm2 > 0.0)
        w.w *= std::sqrt(p_max / norm2);
    return {std::move(w), std::move(phi), Selector::all_ones(cs.dims.users)};
}

namespace {

struct OuterState {
    Precoder w;
    PhaseVector phi;
    Selector b;
};

/// Common outer loop. Per iteration the step callback advances (w, phi) for
/// the current selector; afterwards the selector is refreshed and the clamped
/// objective recorded.
template <typename Step>
RunTrace drive(const ChannelSet& cs, const Weights& weights, double p_max,
               const OptimizerConfig& raw_cfg, const PhaseVector* fixed_phi, Step step) {
    const OptimizerConfig cfg = raw_cfg.effective();
    cfg.validate();

    RunTrace trace;
    OuterState st;
    {
        auto [w0, phi0, b0] = initialize(cs, p_max, cfg.seed);
        st.w = std::move(w0);
        st.phi = fixed_phi ? *fixed_phi : std::move(phi0);
        st.b = std::move(b0);
    }
    trace.initial_objective = wssr(cs, st.w, st.phi, weights);

    double prev = trace.initial_objective;
    for (int it = 0; it < cfg.outer_max_iter; ++it) {
        const double t0 = now_ms();
        step(st, cfg);
        st.b = fp::update_b(cs, st.w, st.phi);
        const double cur = wssr(cs, st.w, st.phi, weights);
        const double cur_q = wssr_q(cs, st.w, st.phi, weights, st.b);
        trace.objective.push_back(cur);
        trace.objective_q.push_back(cur_q);
        trace.wall_ms.push_back(now_ms() - t0);
        if (cfg.record_iterates) {
            trace.w_iterates.push_back(st.w);
            trace.phi_iterates.push_back(st.phi);
        }
        if (it > 0 && cur < prev - kMonotoneSlack)
            throw MonotonicityViolation("outer objective decreased beyond slack at iteration " +
                                        std::to_string(it + 1));
        if (std::abs(cur - prev) <= cfg.outer_rel_tol * (1.0 + std::abs(cur))) {
            trace.converged = true;
            break;
        }
        prev = cur;
    }
    trace.final_w = std::move(st.w);
    trace.final_phi = std::move(st.phi);
    trace.final_b = std::move(st.b);
    return trace;
}

}  // namespace

RunTrace two_tiers(const ChannelSet& cs, const Weights& weights, double p_max,
                   const OptimizerConfig& cfg) {
    return drive(cs, weights, p_max, cfg, nullptr,
                 [&](OuterState& st, const OptimizerConfig& c) {
                     st.w = precoder::inner_loop_a1(cs, st.phi, st.b, weights, p_max, st.w,
                                                    c.inner_max_iter_a1, c.inner_rel_tol)
                                .first;
                     st.phi = phase::inner_loop_a2(cs, st.w, st.b, weights, st.phi, c.tuner,
                                                   c.tuner_max_iter, c.tuner_rel_tol,
                                                   c.inner_max_iter_a2, c.inner_rel_tol)
                                  .first;
                 });
}

RunTrace single_loop(const ChannelSet& cs, const Weights& weights, double p_max,
                     const OptimizerConfig& cfg) {
    OptimizerConfig sl = cfg;
    sl.mode = Mode::SingleLoop;
    return two_tiers(cs, weights, p_max, sl);
}

RunTrace precoder_only(const ChannelSet& cs, const Weights& weights, double p_max,
                       const PhaseVector& phi, const OptimizerConfig& cfg) {
    return drive(cs, weights, p_max, cfg, &phi,
                 [&](OuterState& st, const OptimizerConfig& c) {
                     st.w = precoder::inner_loop_a1(cs, st.phi, st.b, weights, p_max, st.w,
                                                    c.inner_max_iter_a1, c.inner_rel_tol)
                                .first;
                 });
}

}  // namespace secbeam::optimizer
