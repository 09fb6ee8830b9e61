// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace critsplit {

/// SplitMix64 finalizer; used to derive independent per-replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// seed_i = mix(seed, i). Replicate i always sees the same stream regardless of
/// how replicates are scheduled across threads.
constexpr std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Random stream used by every sampler. All variates are derived from raw 64-bit
/// engine output with fixed formulas so a seed reproduces results bit-exactly
/// across standard libraries (std::*_distribution is implementation-defined).
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed = 0x5EED, std::uint64_t stream = 0)
        : engine_(replicate_seed(seed, stream)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1): -log(u) is finite and strictly positive.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform_half_open() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exp(rate) by inversion.
    double exponential(double rate) { return -std::log(uniform01()) / rate; }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Unbiased integer in [0, n) (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    engine_type& engine() { return engine_; }

private:
    engine_type engine_;
};

}  // namespace critsplit
