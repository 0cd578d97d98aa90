#pragma once

// Splittable counter-based random generator. Each Monte Carlo realization gets
// an independent stream keyed by (seed, realization index), so parallel batches
// reproduce serial results bit-for-bit regardless of thread count.

#include <cstdint>

namespace nomacell {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1) — safe as a log/inverse-CDF argument
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
};

// Decorrelates (seed, index) pairs into a stream key.
inline SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    std::uint64_t k = mixer.next_u64();
    return SplitMix64(k);
}

}  // namespace nomacell
