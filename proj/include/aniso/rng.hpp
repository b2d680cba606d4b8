#pragma once

#include <cstdint>

namespace aniso {

/// splitmix64: tiny, fast, high-quality 64-bit generator. Used for every
/// pseudo-random choice in the library so that a single master seed
/// determines all outputs. Independent streams are derived with derive(),
/// which lets parallel trial loops stay reproducible regardless of
/// scheduling.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    /// Deterministic child stream for a labelled subtask.
    SplitMix64 derive(std::uint64_t stream) const {
        SplitMix64 child(state ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
        child.next_u64();
        return child;
    }
};

} // namespace aniso
