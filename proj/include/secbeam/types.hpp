#ifndef SECBEAM_TYPES_HPP
#define SECBEAM_TYPES_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "secbeam/errors.hpp"

namespace secbeam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Antenna/element counts of one wiretap scenario. Eavesdropper count may be
/// zero; everything else must be at least one.
struct SystemDims {
    int tx_antennas = 1;   // M
    int irs_elements = 1;  // N
    int users = 1;         // K
    int eves = 0;          // J

    void validate() const {
        if (tx_antennas < 1 || irs_elements < 1 || users < 1 || eves < 0)
            throw DimensionError("SystemDims: counts out of range");
    }
    bool operator==(const SystemDims&) const = default;
};

/// Unit-modulus reflection coefficients of the IRS, one per element.
struct PhaseVector {
    CVector phi;

    int size() const { return static_cast<int>(phi.size()); }

    /// Largest deviation of |phi_n| from one.
    double unit_modulus_error() const {
        double worst = 0.0;
        for (Eigen::Index n = 0; n < phi.size(); ++n)
            worst = std::max(worst, std::abs(std::abs(phi[n]) - 1.0));
        return worst;
    }

    static PhaseVector all_ones(int n) {
        PhaseVector p;
        p.phi = CVector::Ones(n);
        return p;
    }
};

/// Downlink precoding matrix (one column per user) plus the transmit power
/// budget its Frobenius norm must respect.
struct Precoder {
    CMatrix w;            // M x K
    double p_max = 1.0;   // watts

    double power() const { return w.squaredNorm(); }
    bool power_feasible(double slack = 1e-9) const {
        return power() <= p_max * (1.0 + slack);
    }
};

/// Non-negative QoS weights, one per user.
struct Weights {
    RVector omega;

    static Weights uniform(int users) {
        Weights w;
        w.omega = RVector::Ones(users);
        return w;
    }
};

/// Binary per-user selector realising the variational reformulation at its
/// extreme points.
struct Selector {
    std::vector<std::uint8_t> on;

    int size() const { return static_cast<int>(on.size()); }
    bool none_active() const {
        for (auto v : on)
            if (v) return false;
        return true;
    }
    static Selector all_ones(int users) { return Selector{std::vector<std::uint8_t>(users, 1)}; }
    static Selector all_zeros(int users) { return Selector{std::vector<std::uint8_t>(users, 0)}; }
    bool operator==(const Selector&) const = default;
};

}  // namespace secbeam

#endif
