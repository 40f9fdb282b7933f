#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace eh {

// SplitMix64: counter-based 64-bit generator. Output i is a fixed mix of
// seed + i*gamma, so a stream is fully determined by its seed and can be
// split across workers by deriving sub-seeds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        // 128-bit multiply trick; bias is negligible for our bounds and the
        // result stays deterministic across platforms.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

// Derive a stream seed from a base seed and a stream tag. Used to give each
// walk / trial / stage its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seeded partial Fisher-Yates: first `take` entries of a shuffle of 0..n-1.
inline std::vector<int> sample_without_replacement(int n, int take, SplitMix64& rng) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < take; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

} // namespace eh
