#pragma once

#include <cmath>
#include <cstdint>

namespace gaplab::detail {

/// splitmix64: tiny, well-mixed 64-bit generator.  Chosen over the standard
/// distributions so that streams are identical across platforms and compiler
/// versions, which keeps experiment CSV output byte-stable.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]: never returns 0, so logs are safe.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on two uniforms.
    double normal() {
        const double u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.28318530717958647692 * v);
    }
};

/// Stable per-trial seed derivation: hash of (root seed, stream, index).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    SplitMix64 g(root ^ (0x9E3779B97F4A7C15ULL * (stream + 1)) ^ (index * 0xD1B54A32D192ED03ULL));
    g.next();
    return g.next();
}

}  // namespace gaplab::detail
