// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions below are written out by hand because the
// standard library distributions are implementation-defined, and instance
// files must be byte-identical across toolchains.
//
// Stream splitting: a child stream for (seed, stream_id) is seeded with
// splitmix64(seed ^ splitmix64(stream_id + 1)).

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spinbench {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) noexcept {
    return splitmix64(seed ^ splitmix64(stream_id + 1));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Independent child stream; depends only on the construction seed, not on draws made so far.
    Rng split(std::uint64_t stream_id) const { return Rng(derive_seed(seed_, stream_id)); }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    /// Standard normal via Box-Muller (one value per call, the second is discarded).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    int spin() { return (engine_() >> 63) ? 1 : -1; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace spinbench
