#include "secbeam/scenario.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secbeam::scenario {

namespace {

constexpr double kMinDistance = 1.0;  // path-loss model reference distance

struct Point {
    double x = 0.0, y = 0.0;
};

double distance(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::max(kMinDistance, std::hypot(dx, dy));
}

// Radius and angle drawn independently and uniformly: distances to the disk
// center are uniform on [0, radius], matching the stated sampling of
// terminal distances.
Point sample_in_disk(Point center, double radius, Rng& rng) {
    const double r = radius * rng.uniform();
    const double a = rng.angle();
    return {center.x + r * std::cos(a), center.y + r * std::sin(a)};
}

CMatrix faded_matrix(int rows, int cols, double gain, Rng& rng) {
    const double amp = std::sqrt(gain);
    CMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = amp * rng.cnormal();
    return m;
}

}  // namespace

void ScenarioConfig::validate() const {
    dims.validate();
    if (bs_irs_distance_m <= 0.0 || user_disk_radius_m <= 0.0 || eve_disk_radius_m <= 0.0)
        throw ConfigError("scenario distances must be positive");
    if (exp_direct <= 0.0 || exp_reflect <= 0.0)
        throw ConfigError("path-loss exponents must be positive");
}

void QuantizerConfig::validate() const {
    if (bits < 0 || bits > 16) throw ConfigError("quantizer bits must lie in 0..16");
}

double path_loss(double distance_m, double exponent, double ref_loss_linear) {
    if (distance_m <= 0.0) throw ConfigError("path_loss: distance must be positive");
    return ref_loss_linear / std::pow(distance_m, exponent);
}

ChannelSet sample_channels(const ScenarioConfig& cfg, Rng& rng, SampledGeometry* geometry) {
    cfg.validate();
    const int m = cfg.dims.tx_antennas, n = cfg.dims.irs_elements;
    const int users = cfg.dims.users, eves = cfg.dims.eves;
    const double rho_ref = cfg.ref_loss();

    const Point bs{0.0, 0.0};
    const Point irs{cfg.bs_irs_distance_m, 0.0};

    std::vector<Point> user_pos(users), eve_pos(eves);
    for (auto& p : user_pos) p = sample_in_disk(irs, cfg.user_disk_radius_m, rng);
    for (auto& p : eve_pos) p = sample_in_disk(bs, cfg.eve_disk_radius_m, rng);
    if (geometry) {
        *geometry = SampledGeometry{};
        for (const auto& p : user_pos) {
            geometry->user_bs_m.push_back(distance(p, bs));
            geometry->user_irs_m.push_back(distance(p, irs));
        }
        for (const auto& p : eve_pos) {
            geometry->eve_bs_m.push_back(distance(p, bs));
            geometry->eve_irs_m.push_back(distance(p, irs));
        }
    }

    CMatrix direct_users(m, users), irs_users(n, users);
    for (int k = 0; k < users; ++k) {
        direct_users.col(k) =
            faded_matrix(m, 1, path_loss(distance(user_pos[k], bs), cfg.exp_direct, rho_ref), rng);
        irs_users.col(k) = faded_matrix(
            n, 1, path_loss(distance(user_pos[k], irs), cfg.exp_reflect, rho_ref), rng);
    }
    CMatrix direct_eves(m, eves), irs_eves(n, eves);
    for (int j = 0; j < eves; ++j) {
        direct_eves.col(j) =
            faded_matrix(m, 1, path_loss(distance(eve_pos[j], bs), cfg.exp_direct, rho_ref), rng);
        irs_eves.col(j) = faded_matrix(
            n, 1, path_loss(distance(eve_pos[j], irs), cfg.exp_reflect, rho_ref), rng);
    }
    CMatrix bs_irs = faded_matrix(
        m, n, path_loss(std::max(kMinDistance, cfg.bs_irs_distance_m), cfg.exp_reflect, rho_ref),
        rng);

    const double noise = cfg.noise_power();
    return ChannelSet::assemble(cfg.dims, std::move(direct_users), std::move(direct_eves),
                                std::move(bs_irs), std::move(irs_users), std::move(irs_eves),
                                RVector::Constant(users, noise), RVector::Constant(eves, noise));
}

ChannelSet sample_channels(const ScenarioConfig& cfg) {
    Rng rng(cfg.seed);
    return sample_channels(cfg, rng);
}

optimizer::RunTrace baseline_ref1(const ChannelSet& cs, const Weights& weights, double p_max,
                                  const optimizer::OptimizerConfig& cfg) {
    const ChannelSet off = cs.without_irs();
    return optimizer::precoder_only(off, weights, p_max,
                                    PhaseVector::all_ones(cs.dims.irs_elements), cfg);
}

optimizer::RunTrace baseline_ref2(const ChannelSet& cs, const Weights& weights, double p_max,
                                  const optimizer::OptimizerConfig& cfg, Rng& rng) {
    PhaseVector phi;
    phi.phi = CVector(cs.dims.irs_elements);
    for (int n = 0; n < cs.dims.irs_elements; ++n) {
        const double theta = rng.angle();
        phi.phi[n] = Complex(std::cos(theta), -std::sin(theta));
    }
    return optimizer::precoder_only(cs, weights, p_max, phi, cfg);
}

PhaseVector quantize_phases(const PhaseVector& phi, const QuantizerConfig& q) {
    q.validate();
    if (q.bits == 0) return phi;
    const double levels = std::ldexp(1.0, q.bits);
    const double step = 2.0 * M_PI / levels;
    PhaseVector out = phi;
    for (Eigen::Index n = 0; n < phi.phi.size(); ++n) {
        // phi_n = e^{-j theta_n}; recover theta in [0, 2*pi).
        double theta = -std::arg(phi.phi[n]);
        if (theta < 0.0) theta += 2.0 * M_PI;
        double idx = std::floor(theta / step + 0.5);
        // Half-way points resolve toward the smaller codeword index.
        if (std::abs((idx - 0.5) * step - theta) <= 0.0) idx -= 1.0;
        if (idx >= levels) idx = 0.0;  // wrap-around: 2*pi is codeword 0
        const double snapped = idx * step;
        out.phi[n] = Complex(std::cos(snapped), -std::sin(snapped));
    }
    return out;
}

ErgodicResult ergodic_average(
    const std::function<RealizationOutcome(int index, std::uint64_t seed)>& runner,
    std::uint64_t master_seed, int realizations, int jobs,
    std::vector<RealizationOutcome>* per_realization) {
    if (realizations < 1) throw ConfigError("ergodic_average: need at least one realization");
    std::vector<RealizationOutcome> out(static_cast<std::size_t>(realizations));
#ifdef _OPENMP
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int i = 0; i < realizations; ++i)
        out[static_cast<std::size_t>(i)] = runner(i, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    if (per_realization) *per_realization = out;

    ErgodicResult res;
    res.realizations = realizations;
    double sum = 0.0, sum_ms = 0.0;
    for (const auto& o : out) {
        sum += o.value;
        sum_ms += o.runtime_ms;
    }
    res.mean = sum / realizations;
    res.mean_runtime_ms = sum_ms / realizations;
    if (realizations > 1) {
        double ss = 0.0;
        for (const auto& o : out) ss += (o.value - res.mean) * (o.value - res.mean);
        res.std_error = std::sqrt(ss / (realizations - 1)) / std::sqrt(double(realizations));
    }
    return res;
}

RealizationOutcome run_realization(const ScenarioConfig& scenario,
                                   const optimizer::OptimizerConfig& opt, Algorithm alg,
                                   std::uint64_t seed, const QuantizerConfig& quant) {
    ScenarioConfig sc = scenario;
    sc.seed = seed;
    Rng rng(seed);
    const ChannelSet cs = sample_channels(sc, rng);
    const Weights weights = Weights::uniform(cs.dims.users);
    const double p_max = sc.p_max();

    optimizer::OptimizerConfig oc = opt;
    oc.seed = derive_seed(seed, 0x5eedULL);

    const auto t0 = std::chrono::steady_clock::now();
    optimizer::RunTrace trace;
    switch (alg) {
        case Algorithm::TwoTiers:
            oc.mode = optimizer::Mode::TwoTiers;
            trace = optimizer::two_tiers(cs, weights, p_max, oc);
            break;
        case Algorithm::SingleLoop:
            oc.mode = optimizer::Mode::SingleLoop;
            trace = optimizer::single_loop(cs, weights, p_max, oc);
            break;
        case Algorithm::Ref1:
            trace = baseline_ref1(cs, weights, p_max, oc);
            break;
        case Algorithm::Ref2:
            trace = baseline_ref2(cs, weights, p_max, oc, rng);
            break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    RealizationOutcome out;
    out.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (quant.bits > 0 && (alg == Algorithm::TwoTiers || alg == Algorithm::SingleLoop)) {
        const PhaseVector quantized = quantize_phases(trace.final_phi, quant);
        out.value = wssr(cs, trace.final_w, quantized, weights);
    } else {
        out.value = trace.final_objective();
    }
    return out;
}

}  // namespace secbeam::scenario
