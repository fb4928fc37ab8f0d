#ifndef SECBEAM_RNG_HPP
#define SECBEAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "secbeam/types.hpp"

namespace secbeam {

/// Deterministic random source. Distributions are implemented locally on top
/// of mt19937_64 (whose output sequence is pinned by the standard) so that
/// streams are reproducible across compilers and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform on [0, 2*pi).
    double angle() { return uniform() * 2.0 * M_PI; }

    /// Standard real normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = angle();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal with unit variance (E|x|^2 = 1).
    Complex cnormal() {
        const double s = 1.0 / std::sqrt(2.0);
        const double re = normal();
        const double im = normal();
        return Complex(re * s, im * s);
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// splitmix64 step, used to derive independent per-realization seeds from a
/// master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace secbeam

#endif
