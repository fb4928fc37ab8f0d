#ifndef SECBEAM_CHANNEL_HPP
#define SECBEAM_CHANNEL_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "secbeam/types.hpp"

namespace secbeam {

/// One realization of the wiretap system: direct channels, the BS-IRS link,
/// the per-terminal IRS-side channels with their precomputed cascades, and
/// the per-terminal noise powers (linear watts). Immutable after assembly.
struct ChannelSet {
    SystemDims dims;

    CMatrix direct_users;  // M x K, columns h_{d,k}
    CMatrix direct_eves;   // M x J, columns g_{d,j}
    CMatrix bs_irs;        // M x N
    CMatrix irs_users;     // N x K, columns h_{r,k}
    CMatrix irs_eves;      // N x J, columns g_{r,j}

    // Cascades bs_irs * diag(irs side column); phase-independent, built once.
    std::vector<CMatrix> cascade_users;  // K matrices, M x N
    std::vector<CMatrix> cascade_eves;   // J matrices, M x N

    RVector noise_users;  // sigma_k^2 > 0
    RVector noise_eves;   // mu_j^2 > 0

    /// Builds the cascaded matrices from the raw links and validates shapes.
    static ChannelSet assemble(SystemDims dims, CMatrix direct_users,
                               CMatrix direct_eves, CMatrix bs_irs,
                               CMatrix irs_users, CMatrix irs_eves,
                               RVector noise_users, RVector noise_eves);

    /// Copy with every IRS-side link zeroed; models a switched-off surface.
    ChannelSet without_irs() const;

    void save(std::ostream& out) const;
    static ChannelSet load(std::istream& in);
    void save_file(const std::string& path) const;
    static ChannelSet load_file(const std::string& path);
};

/// Effective end-to-end channel of user k: direct column plus cascade * phi.
CVector effective_user_channel(const ChannelSet& cs, int k, const PhaseVector& phi);

/// Effective end-to-end channel of eavesdropper j.
CVector effective_eve_channel(const ChannelSet& cs, int j, const PhaseVector& phi);

/// All effective user channels as columns of an M x K matrix.
CMatrix effective_user_matrix(const ChannelSet& cs, const PhaseVector& phi);

/// All effective eavesdropper channels as columns of an M x J matrix.
CMatrix effective_eve_matrix(const ChannelSet& cs, const PhaseVector& phi);

double sinr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k);

/// Worst-case eavesdropping SNR of stream k: noise-weighted leakage power
/// stacked over all cooperating eavesdroppers.
double esnr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k);

/// Per-user secrecy rate in bits, clamped at zero.
double secrecy_rate(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k);

/// Weighted secrecy sum-rate (clamped per-user terms).
double wssr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi,
            const Weights& weights);

/// Selected, unclamped variational objective; negative terms are allowed
/// whenever an active user has SINR below its leakage SNR.
double wssr_q(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi,
              const Weights& weights, const Selector& b);

namespace detail {
constexpr double kLog2Inv = 1.4426950408889634074;  // 1/ln 2
inline double log2_ratio(double sinr_v, double esnr_v) {
    return (std::log1p(sinr_v) - std::log1p(esnr_v)) * kLog2Inv;
}
}  // namespace detail

}  // namespace secbeam

#endif
