// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <thread>

namespace spinbench {

namespace {

bool better(const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return lex_less(a.config, b.config);
}

struct WorseFirst {
    bool operator()(const SpectrumEntry& a, const SpectrumEntry& b) const { return better(a, b); }
};

class TopK {
  public:
    explicit TopK(std::size_t k) : k_(k) {}

    bool full() const { return heap_.size() >= k_; }
    double threshold() const { return heap_.top().energy; }

    void offer(const SpinConfig& s, double e) {
        if (!full()) {
            heap_.push({s, e});
        } else if (e < heap_.top().energy || (e == heap_.top().energy && lex_less(s, heap_.top().config))) {
            heap_.pop();
            heap_.push({s, e});
        }
    }

    std::vector<SpectrumEntry> take() {
        std::vector<SpectrumEntry> out;
        out.reserve(heap_.size());
        while (!heap_.empty()) {
            out.push_back(heap_.top());
            heap_.pop();
        }
        return out;
    }

  private:
    std::size_t k_;
    std::priority_queue<SpectrumEntry, std::vector<SpectrumEntry>, WorseFirst> heap_;
};

double energy_scale(const IsingModel& model) {
    double scale = 1.0 + model.fields().cwiseAbs().sum();
    for (const auto& c : model.couplings()) scale += std::abs(c.value);
    return scale;
}

std::vector<SpectrumEntry> run_shard(const IsingModel& model, std::size_t k, int prefix_bits, std::uint64_t prefix,
                                     bool mirror, double eps) {
    const int n = model.num_spins();
    SpinConfig s(n);
    for (int i = 0; i < prefix_bits; ++i) s[i] = ((prefix >> (prefix_bits - 1 - i)) & 1U) ? 1 : -1;
    std::vector<int> free(n - prefix_bits);
    for (int i = prefix_bits; i < n; ++i) free[i - prefix_bits] = i;

    TopK top(k);
    SpinConfig flipped(n);
    detail::gray_walk(model, free, s, [&](const SpinConfig& cfg, double e) {
        if (top.full() && e > top.threshold() + eps) return;
        const double exact = energy(model, cfg);
        top.offer(cfg, exact);
        if (mirror) {
            flipped = -cfg;
            top.offer(flipped, exact);
        }
    });
    return top.take();
}

}  // namespace

std::vector<EnergyLevel> Spectrum::levels(double tol) const {
    std::vector<EnergyLevel> out;
    for (const auto& st : states) {
        if (out.empty() || std::abs(st.energy - out.back().energy) > tol * std::max(1.0, std::abs(st.energy))) {
            out.push_back({st.energy, {}});
        }
        out.back().configs.push_back(st.config);
    }
    return out;
}

Spectrum brute_force(const IsingModel& model, std::size_t k, const BruteForceOptions& options) {
    const int n = model.num_spins();
    if (k == 0) throw std::invalid_argument("brute_force: k must be positive");
    const bool mirror = n > 0 && !model.has_fields();
    int prefix_bits = std::clamp(options.prefix_bits, 0, n);
    if (n - prefix_bits > options.cap)
        throw CapacityError("brute_force: " + std::to_string(n - prefix_bits) + " free spins per shard exceeds cap " +
                            std::to_string(options.cap));
    if (prefix_bits > 40) throw CapacityError("brute_force: too many shards");
    if (mirror) prefix_bits = std::max(prefix_bits, 1);

    // With mirroring only shards whose first spin is -1 are walked.
    const std::uint64_t shards = (std::uint64_t{1} << prefix_bits) >> (mirror ? 1 : 0);
    const double eps = 1e-9 * energy_scale(model);
    std::vector<std::vector<SpectrumEntry>> results(shards);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t p; (p = next.fetch_add(1)) < shards;) results[p] = run_shard(model, k, prefix_bits, p, mirror, eps);
    };
    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(shards)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    Spectrum spectrum;
    for (auto& r : results)
        for (auto& e : r) spectrum.states.push_back(std::move(e));
    std::sort(spectrum.states.begin(), spectrum.states.end(), better);
    if (spectrum.states.size() > k) spectrum.states.resize(k);
    return spectrum;
}

void for_each_state(const IsingModel& model, const std::function<void(const SpinConfig&, double)>& visit, int cap) {
    const int n = model.num_spins();
    if (n > cap) throw CapacityError("for_each_state: " + std::to_string(n) + " spins exceeds cap " + std::to_string(cap));
    std::vector<int> free(n);
    for (int i = 0; i < n; ++i) free[i] = i;
    SpinConfig s(n);
    detail::gray_walk(model, free, s, visit);
}

Eigen::VectorXd exact_marginal(const IsingModel& model, double beta, const PartialAssignment& fixed,
                               std::span<const int> targets, int cap) {
    const int n = model.num_spins();
    if (fixed.size() != n) throw DimensionError("partial assignment length does not match spin count");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
    std::vector<char> is_target(n, 0);
    for (int t : targets) {
        if (t < 0 || t >= n) throw std::invalid_argument("target spin out of range");
        if (fixed[t] != 0) throw std::invalid_argument("target spin " + std::to_string(t) + " is already fixed");
        if (is_target[t]) throw std::invalid_argument("target spin listed twice");
        is_target[t] = 1;
    }
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
        if (fixed[i] != 0 && fixed[i] != 1 && fixed[i] != -1) throw DomainError("partial assignment entry not in {-1,0,1}");
        if (fixed[i] == 0 && !is_target[i]) free.push_back(i);
    }
    if (static_cast<int>(free.size() + targets.size()) > cap)
        throw CapacityError("exact_marginal: too many unfixed spins for enumeration");

    SpinConfig s(n);
    for (int i = 0; i < n; ++i) s[i] = fixed[i];
    const std::size_t m = targets.size();
    const std::uint64_t outcomes = std::uint64_t{1} << m;
    std::vector<double> log_z(outcomes);
    for (std::uint64_t a = 0; a < outcomes; ++a) {
        for (std::size_t b = 0; b < m; ++b) s[targets[b]] = ((a >> (m - 1 - b)) & 1U) ? 1 : -1;
        double mx = -std::numeric_limits<double>::infinity();
        double acc = 0.0;
        detail::gray_walk(model, free, s, [&](const SpinConfig&, double e) {
            const double x = -beta * e;
            if (x > mx) {
                acc = acc * std::exp(mx - x) + 1.0;
                mx = x;
            } else {
                acc += std::exp(x - mx);
            }
        });
        log_z[a] = mx + std::log(acc);
    }
    const double total = log_sum_exp(log_z);
    Eigen::VectorXd p(static_cast<Eigen::Index>(outcomes));
    for (std::uint64_t a = 0; a < outcomes; ++a) p[static_cast<Eigen::Index>(a)] = std::exp(log_z[a] - total);
    return p;
}

std::array<double, 2> exact_conditional(const IsingModel& model, double beta, const PartialAssignment& fixed,
                                        int target, int cap) {
    const int t[1] = {target};
    const Eigen::VectorXd p = exact_marginal(model, beta, fixed, t, cap);
    return {p[0], p[1]};
}

}  // namespace spinbench
