#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace levyforage {

// splitmix64 finalizer. Bijective on 64-bit words, so distinct inputs give
// distinct outputs; used for stream derivation and per-replicate seeding.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream from a base seed and a fixed tag.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed) ^ tag);
}

// Per-replicate seed for sweeps: cell and replicate indices are packed into
// one word, so all (cell, replicate) pairs map to distinct seeds as long as
// both indices fit in 32 bits.
inline constexpr std::uint64_t replicate_seed(std::uint64_t base, std::uint32_t cell,
                                              std::uint32_t replicate) {
    return mix64(mix64(base) ^ ((static_cast<std::uint64_t>(cell) << 32) | replicate));
}

// Deterministic generator: mt19937_64 (fully specified by the standard) with
// fixed-width conversions instead of std::*_distribution, whose outputs are
// implementation-defined. Equal seeds give equal streams on any conforming
// standard library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t rem = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= rem) return x % n;
        }
    }

    int rademacher() { return (next_u64() >> 63) ? 1 : -1; }

    // Marsaglia polar method; avoids trig so the stream stays portable.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return mean + stddev * (u * m);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stream tags separating world construction from agent decisions, so both
// are independently reproducible from one run seed.
inline constexpr std::uint64_t kWorldStreamTag = 0x574f524c44u;
inline constexpr std::uint64_t kAgentStreamTag = 0x4147454e54u;

} // namespace levyforage
