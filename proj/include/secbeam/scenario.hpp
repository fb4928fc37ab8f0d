#ifndef SECBEAM_SCENARIO_HPP
#define SECBEAM_SCENARIO_HPP

#include <functional>

#include "secbeam/optimizer.hpp"
#include "secbeam/rng.hpp"

namespace secbeam::scenario {

/// Randomized experiment geometry and link-budget parameters. The BS sits at
/// the origin, the IRS on the x-axis at the stated distance; users fall
/// uniformly over a disk around the IRS, eavesdroppers over a disk around
/// the BS. dB fields are converted once at sampling time.
struct ScenarioConfig {
    SystemDims dims{8, 128, 4, 6};
    double bs_irs_distance_m = 25.0;
    double user_disk_radius_m = 10.0;
    double eve_disk_radius_m = 10.0;
    double ref_loss_db = -30.0;
    double exp_direct = 3.5;
    double exp_reflect = 2.3;
    double noise_db = -147.0;
    double p_max_db = -30.0;
    std::uint64_t seed = 1;

    double p_max() const { return std::pow(10.0, p_max_db / 10.0); }
    double noise_power() const { return std::pow(10.0, noise_db / 10.0); }
    double ref_loss() const { return std::pow(10.0, ref_loss_db / 10.0); }
    void validate() const;
};

struct QuantizerConfig {
    int bits = 0;  // 0 = unquantized passthrough, otherwise 1..16
    void validate() const;
};

/// Mean channel power gain at distance d (meters): ref_loss / d^exponent.
double path_loss(double distance_m, double exponent, double ref_loss_linear);

/// Distances drawn for one realization, exposed for geometry checks.
struct SampledGeometry {
    std::vector<double> user_bs_m, user_irs_m;
    std::vector<double> eve_bs_m, eve_irs_m;
};

/// Draws terminal positions and Rayleigh-fading links; every entry is
/// sqrt(pathloss) times a unit-variance circular Gaussian. Distances below
/// one meter are clamped to the reference distance.
ChannelSet sample_channels(const ScenarioConfig& cfg, Rng& rng,
                           SampledGeometry* geometry = nullptr);
ChannelSet sample_channels(const ScenarioConfig& cfg);

/// Reference scenario with the surface switched off: the precoder FP loop
/// runs on the direct channels only.
optimizer::RunTrace baseline_ref1(const ChannelSet& cs, const Weights& weights, double p_max,
                                  const optimizer::OptimizerConfig& cfg);

/// Reference scenario with uniformly random fixed phase-shifts; the precoder
/// loop runs on the resulting effective channels.
optimizer::RunTrace baseline_ref2(const ChannelSet& cs, const Weights& weights, double p_max,
                                  const optimizer::OptimizerConfig& cfg, Rng& rng);

/// Snaps every phase to the nearest point of the 2^bits uniform codebook
/// (ties toward the smaller codeword index). Unit modulus is preserved
/// exactly; bits = 0 returns the input unchanged.
PhaseVector quantize_phases(const PhaseVector& phi, const QuantizerConfig& q);

struct ErgodicResult {
    double mean = 0.0;
    double std_error = 0.0;
    double mean_runtime_ms = 0.0;
    int realizations = 0;
};

struct RealizationOutcome {
    double value = 0.0;
    double runtime_ms = 0.0;
};

/// Runs one experiment per realization with independently derived seeds and
/// averages the outcomes. Realizations execute in parallel (bounded by jobs,
/// 0 = hardware default) and are reduced in index order, so the statistics
/// are independent of the thread count. Per-realization outcomes are copied
/// out in index order when requested.
ErgodicResult ergodic_average(
    const std::function<RealizationOutcome(int index, std::uint64_t seed)>& runner,
    std::uint64_t master_seed, int realizations, int jobs = 0,
    std::vector<RealizationOutcome>* per_realization = nullptr);

enum class Algorithm { TwoTiers, SingleLoop, Ref1, Ref2 };

/// One full realization of a named algorithm: sample channels, optimize,
/// return the final clamped objective (optionally after phase quantization).
RealizationOutcome run_realization(const ScenarioConfig& scenario,
                                   const optimizer::OptimizerConfig& opt, Algorithm alg,
                                   std::uint64_t seed, const QuantizerConfig& quant = {});

}  // namespace secbeam::scenario

#endif
