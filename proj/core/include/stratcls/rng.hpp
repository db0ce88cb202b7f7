#pragma once

#include <cstdint>
#include <random>

#include "stratcls/numerics.hpp"

namespace stratcls {

/// splitmix64 mix step; used to derive independent per-task seeds from a
/// single base seed so parallel sweep rows stay reproducible.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator producing a platform-stable stream of uniforms and
/// normals. Draws bypass std::uniform_real_distribution (whose output is
/// implementation-defined) and map raw mt19937_64 words directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in the open interval (0,1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via inverse-CDF transform.
    double normal() { return std_normal_quantile(uniform()); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

}  // namespace stratcls
