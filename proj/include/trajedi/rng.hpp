#ifndef TRAJEDI_RNG_HPP
#define TRAJEDI_RNG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace trajedi {

/// Seeded random source with a fully pinned algorithm.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions in <random> are implementation-defined, so the
/// derived draws are written out here to keep generated datasets identical
/// across standard libraries:
///
///   uniform01()        (x >> 11) * 2^-53, in [0, 1)
///   uniform_index(n)   rejection of x < (2^64 - n) mod n, then x mod n
///   normal(mu, sd)     Box-Muller cosine branch, one normal per two uniforms,
///                      u1 = 1 - uniform01() so that log(u1) is finite
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        const auto bound = static_cast<std::uint64_t>(n);
        const std::uint64_t reject_below = (0 - bound) % bound;
        std::uint64_t x = engine_();
        while (x < reject_below) {
            x = engine_();
        }
        return static_cast<std::size_t>(x % bound);
    }

    double normal(double mean, double sd) {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mean + sd * z;
    }

private:
    engine_type engine_;
};

} // namespace trajedi

#endif // TRAJEDI_RNG_HPP
