#pragma once

#include <cstdint>

namespace sparenet {

// 64-bit finalizer used by splitmix64. Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Deterministic per-stream seed derivation. Every parallel trial, network or
// condition gets its own stream via derive_seed(master, index), so results do
// not depend on scheduling or worker count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + kGoldenGamma * (stream + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

// splitmix64: small, portable, fully specified generator. All simulation
// randomness goes through this engine so any two builds replay identical
// trial streams for the same seeds.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform draw from [0, n). Multiply-shift reduction; the bias of
    // n / 2^64 is far below anything observable at our sample sizes, and the
    // result is identical on every platform with 64x64->128 multiplication.
    constexpr std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    constexpr int bounded_int(int n) {
        return static_cast<int>(bounded(static_cast<std::uint64_t>(n)));
    }

private:
    std::uint64_t state_;
};

}  // namespace sparenet
