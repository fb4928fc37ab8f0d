#include "secbeam/channel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

namespace secbeam {

namespace {

void check_shape(const CMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols)
        throw DimensionError(std::string("ChannelSet: bad shape for ") + what);
}

}  // namespace

ChannelSet ChannelSet::assemble(SystemDims dims, CMatrix direct_users,
                                CMatrix direct_eves, CMatrix bs_irs,
                                CMatrix irs_users, CMatrix irs_eves,
                                RVector noise_users, RVector noise_eves) {
    dims.validate();
    const int m = dims.tx_antennas, n = dims.irs_elements, k = dims.users, j = dims.eves;
    check_shape(direct_users, m, k, "direct user channels");
    check_shape(direct_eves, m, j, "direct eavesdropper channels");
    check_shape(bs_irs, m, n, "BS-IRS channel");
    check_shape(irs_users, n, k, "IRS-side user channels");
    check_shape(irs_eves, n, j, "IRS-side eavesdropper channels");
    if (noise_users.size() != k || noise_eves.size() != j)
        throw DimensionError("ChannelSet: noise vector length mismatch");
    if ((noise_users.array() <= 0.0).any() || (noise_eves.array() <= 0.0).any())
        throw DimensionError("ChannelSet: noise powers must be strictly positive");

    ChannelSet cs;
    cs.dims = dims;
    cs.direct_users = std::move(direct_users);
    cs.direct_eves = std::move(direct_eves);
    cs.bs_irs = std::move(bs_irs);
    cs.irs_users = std::move(irs_users);
    cs.irs_eves = std::move(irs_eves);
    cs.noise_users = std::move(noise_users);
    cs.noise_eves = std::move(noise_eves);

    cs.cascade_users.reserve(k);
    for (int u = 0; u < k; ++u)
        cs.cascade_users.push_back(cs.bs_irs * cs.irs_users.col(u).asDiagonal());
    cs.cascade_eves.reserve(j);
    for (int e = 0; e < j; ++e)
        cs.cascade_eves.push_back(cs.bs_irs * cs.irs_eves.col(e).asDiagonal());
    return cs;
}

ChannelSet ChannelSet::without_irs() const {
    return assemble(dims, direct_users, direct_eves, CMatrix::Zero(dims.tx_antennas, dims.irs_elements),
                    CMatrix::Zero(dims.irs_elements, dims.users),
                    CMatrix::Zero(dims.irs_elements, dims.eves), noise_users, noise_eves);
}

CVector effective_user_channel(const ChannelSet& cs, int k, const PhaseVector& phi) {
    if (k < 0 || k >= cs.dims.users) throw std::out_of_range("user index out of range");
    if (phi.size() != cs.dims.irs_elements) throw DimensionError("phase vector length mismatch");
    return cs.direct_users.col(k) + cs.cascade_users[static_cast<std::size_t>(k)] * phi.phi;
}

CVector effective_eve_channel(const ChannelSet& cs, int j, const PhaseVector& phi) {
    if (j < 0 || j >= cs.dims.eves) throw std::out_of_range("eavesdropper index out of range");
    if (phi.size() != cs.dims.irs_elements) throw DimensionError("phase vector length mismatch");
    return cs.direct_eves.col(j) + cs.cascade_eves[static_cast<std::size_t>(j)] * phi.phi;
}

CMatrix effective_user_matrix(const ChannelSet& cs, const PhaseVector& phi) {
    CMatrix h(cs.dims.tx_antennas, cs.dims.users);
    for (int k = 0; k < cs.dims.users; ++k) h.col(k) = effective_user_channel(cs, k, phi);
    return h;
}

CMatrix effective_eve_matrix(const ChannelSet& cs, const PhaseVector& phi) {
    CMatrix g(cs.dims.tx_antennas, cs.dims.eves);
    for (int j = 0; j < cs.dims.eves; ++j) g.col(j) = effective_eve_channel(cs, j, phi);
    return g;
}

double sinr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k) {
    const CVector h = effective_user_channel(cs, k, phi);
    if (w.w.rows() != cs.dims.tx_antennas || w.w.cols() != cs.dims.users)
        throw DimensionError("precoder shape mismatch");
    double interference = cs.noise_users[k];
    double signal = 0.0;
    for (int i = 0; i < cs.dims.users; ++i) {
        const double p = std::norm(h.dot(w.w.col(i)));
        if (i == k)
            signal = p;
        else
            interference += p;
    }
    return signal / interference;
}

double esnr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k) {
    if (k < 0 || k >= cs.dims.users) throw std::out_of_range("user index out of range");
    double leak = 0.0;
    for (int j = 0; j < cs.dims.eves; ++j) {
        const CVector g = effective_eve_channel(cs, j, phi);
        leak += std::norm(g.dot(w.w.col(k))) / cs.noise_eves[j];
    }
    return leak;
}

double secrecy_rate(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi, int k) {
    return std::max(0.0, detail::log2_ratio(sinr(cs, w, phi, k), esnr(cs, w, phi, k)));
}

double wssr(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi,
            const Weights& weights) {
    double total = 0.0;
    for (int k = 0; k < cs.dims.users; ++k)
        total += weights.omega[k] * secrecy_rate(cs, w, phi, k);
    return total;
}

double wssr_q(const ChannelSet& cs, const Precoder& w, const PhaseVector& phi,
              const Weights& weights, const Selector& b) {
    if (b.size() != cs.dims.users) throw DimensionError("selector length mismatch");
    double total = 0.0;
    for (int k = 0; k < cs.dims.users; ++k) {
        if (!b.on[static_cast<std::size_t>(k)]) continue;
        total += weights.omega[k] * detail::log2_ratio(sinr(cs, w, phi, k), esnr(cs, w, phi, k));
    }
    return total;
}

// ---------------------------------------------------------------------------
// Snapshot format: magic, dims header, then the raw link arrays column-major
// as interleaved re/im doubles, then the noise vectors. Cascades are rebuilt
// on load.

namespace {

constexpr char kMagic[8] = {'S', 'B', 'C', 'S', '0', '0', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void write_cmatrix(std::ostream& out, const CMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double re = m(r, c).real(), im = m(r, c).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof(re));
            out.write(reinterpret_cast<const char*>(&im), sizeof(im));
        }
}

CMatrix read_cmatrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            double re = 0, im = 0;
            in.read(reinterpret_cast<char*>(&re), sizeof(re));
            in.read(reinterpret_cast<char*>(&im), sizeof(im));
            m(r, c) = Complex(re, im);
        }
    return m;
}

void write_rvector(std::ostream& out, const RVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v[i];
        out.write(reinterpret_cast<const char*>(&x), sizeof(x));
    }
}

RVector read_rvector(std::istream& in, Eigen::Index n) {
    RVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double x = 0;
        in.read(reinterpret_cast<char*>(&x), sizeof(x));
        v[i] = x;
    }
    return v;
}

}  // namespace

void ChannelSet::save(std::ostream& out) const {
    out.write(kMagic, sizeof(kMagic));
    write_u64(out, static_cast<std::uint64_t>(dims.tx_antennas));
    write_u64(out, static_cast<std::uint64_t>(dims.irs_elements));
    write_u64(out, static_cast<std::uint64_t>(dims.users));
    write_u64(out, static_cast<std::uint64_t>(dims.eves));
    write_cmatrix(out, direct_users);
    write_cmatrix(out, direct_eves);
    write_cmatrix(out, bs_irs);
    write_cmatrix(out, irs_users);
    write_cmatrix(out, irs_eves);
    write_rvector(out, noise_users);
    write_rvector(out, noise_eves);
    if (!out) throw IoError("ChannelSet: write failed");
}

ChannelSet ChannelSet::load(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("ChannelSet: bad snapshot header");
    SystemDims dims;
    dims.tx_antennas = static_cast<int>(read_u64(in));
    dims.irs_elements = static_cast<int>(read_u64(in));
    dims.users = static_cast<int>(read_u64(in));
    dims.eves = static_cast<int>(read_u64(in));
    const int m = dims.tx_antennas, n = dims.irs_elements, k = dims.users, j = dims.eves;
    CMatrix du = read_cmatrix(in, m, k);
    CMatrix de = read_cmatrix(in, m, j);
    CMatrix t = read_cmatrix(in, m, n);
    CMatrix iu = read_cmatrix(in, n, k);
    CMatrix ie = read_cmatrix(in, n, j);
    RVector nu = read_rvector(in, k);
    RVector ne = read_rvector(in, j);
    if (!in) throw IoError("ChannelSet: truncated snapshot");
    return assemble(dims, std::move(du), std::move(de), std::move(t), std::move(iu),
                    std::move(ie), std::move(nu), std::move(ne));
}

void ChannelSet::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    save(out);
}

ChannelSet ChannelSet::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return load(in);
}

}  // namespace secbeam
