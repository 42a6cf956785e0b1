// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive enumeration: low-energy spectra and exact conditionals.
//
// Traversal is the binary-reflected Gray code over the free spins; step k
// flips the free spin at position ctz(k) counted from the last one, so the
// last spin flips fastest and the walk starts at all -1. Every flip costs
// O(degree) through a local-field cache.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spinbench/model.hpp"

namespace spinbench {

inline constexpr int kBruteForceCap = 24;

struct SpectrumEntry {
    SpinConfig config;
    double energy = 0.0;
};

struct EnergyLevel {
    double energy = 0.0;
    std::vector<SpinConfig> configs;
};

/// Sorted by (energy, lexicographic config with -1 < +1).
struct Spectrum {
    std::vector<SpectrumEntry> states;

    double ground_energy() const { return states.front().energy; }
    /// Groups consecutive states whose energies agree within `tol` relative.
    std::vector<EnergyLevel> levels(double tol = 1e-9) const;
};

struct BruteForceOptions {
    /// N - prefix_bits may not exceed this.
    int cap = kBruteForceCap;
    /// The first `prefix_bits` spins are fixed per shard; 2^prefix_bits shards.
    int prefix_bits = 0;
    int workers = 1;
};

/// Energies are recomputed term-by-term for every retained state, so they
/// match `energy()` bit-for-bit. With all fields zero only half of the space
/// is walked and global-flip partners are added.
Spectrum brute_force(const IsingModel& model, std::size_t k = 100, const BruteForceOptions& options = {});

/// Streams every configuration with its incrementally updated energy.
void for_each_state(const IsingModel& model, const std::function<void(const SpinConfig&, double)>& visit,
                    int cap = kBruteForceCap);

/// Entry 0 == fixed, anything else is +-1.
using PartialAssignment = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;

/// Joint distribution of `targets` given `fixed`, indexed lexicographically
/// over the targets in the order given (first target most significant).
Eigen::VectorXd exact_marginal(const IsingModel& model, double beta, const PartialAssignment& fixed,
                               std::span<const int> targets, int cap = kBruteForceCap);

/// {p(s_target = -1 | fixed), p(s_target = +1 | fixed)}.
std::array<double, 2> exact_conditional(const IsingModel& model, double beta, const PartialAssignment& fixed,
                                        int target, int cap = kBruteForceCap);

namespace detail {

/// Walks all 2^|free| assignments of the `free` spins in Gray order. `s`
/// carries the fixed spins; free spins are reset to -1 before the walk.
template <class Visit>
void gray_walk(const IsingModel& model, std::span<const int> free, SpinConfig& s, Visit&& visit) {
    for (int i : free) s[i] = -1;
    const int n = model.num_spins();
    std::vector<double> lf(n);
    for (int i = 0; i < n; ++i) lf[i] = model.local_field(i, s);
    double e = energy(model, s);
    visit(static_cast<const SpinConfig&>(s), e);
    const std::uint64_t count = std::uint64_t{1} << free.size();
    const int last = static_cast<int>(free.size()) - 1;
    for (std::uint64_t step = 1; step < count; ++step) {
        const int k = free[last - std::countr_zero(step)];
        e -= 2.0 * s[k] * lf[k];
        s[k] = static_cast<std::int8_t>(-s[k]);
        const double twice = 2.0 * s[k];
        for (const auto& nb : model.neighbors(k)) lf[nb.index] += twice * nb.coupling;
        visit(static_cast<const SpinConfig&>(s), e);
    }
}

}  // namespace detail

}  // namespace spinbench
