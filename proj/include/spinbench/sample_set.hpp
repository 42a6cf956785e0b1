// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spinbench/model.hpp"

namespace spinbench {

struct Sample {
    SpinConfig spins;
    double energy = 0.0;
    int replica = 0;
};

struct SampleSet {
    std::string solver;
    std::uint64_t seed = 0;
    /// Wall-clock seconds of a single run (total time / number of records).
    double run_time = 0.0;
    std::vector<Sample> records;

    std::size_t best_index() const;
    double best_energy() const { return records.at(best_index()).energy; }
    const SpinConfig& best_spins() const { return records.at(best_index()).spins; }
};

/// Worker count from SPINBENCH_WORKERS, else hardware concurrency.
int default_workers();

/// Calls `body(r)` for r in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

/// Throws if any record's energy differs from a fresh evaluation by more than `tol`.
void verify_energies(const IsingModel& model, const SampleSet& set, double tol = 1e-10);

}  // namespace spinbench
