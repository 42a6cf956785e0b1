// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/sample_set.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace spinbench {

std::size_t SampleSet::best_index() const {
    if (records.empty()) throw std::out_of_range("empty sample set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].energy < records[best].energy) best = i;
    return best;
}

int default_workers() {
    if (const char* env = std::getenv("SPINBENCH_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i; (i = next.fetch_add(1)) < count;) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

void verify_energies(const IsingModel& model, const SampleSet& set, double tol) {
    for (std::size_t r = 0; r < set.records.size(); ++r) {
        const double e = energy(model, set.records[r].spins);
        if (std::abs(e - set.records[r].energy) > tol)
            throw std::logic_error("record " + std::to_string(r) + " energy " + std::to_string(set.records[r].energy) +
                                   " does not match recomputed " + std::to_string(e));
    }
}

}  // namespace spinbench
