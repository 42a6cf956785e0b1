// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spinbench/rng.hpp"

namespace spinbench {

void validate(const MetricConfig& c) {
    if (!(c.target_confidence > 0.0 && c.target_confidence < 1.0))
        throw std::invalid_argument("target confidence must lie in (0, 1)");
    if (!(c.approximation_ratio >= 0.0)) throw std::invalid_argument("approximation ratio must be >= 0");
    if (!(c.independence_fraction > 0.0 && c.independence_fraction <= 1.0))
        throw std::invalid_argument("independence fraction must lie in (0, 1]");
    if (c.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

double e_approx(double e, double e_best) {
    if (e_best == 0.0) throw UndefinedMetricError("e_approx is undefined for a zero reference energy");
    return (e - e_best) / (2.0 * std::abs(e_best));
}

double tts(double p_s, double p_t, double t_run) {
    if (!(p_s >= 0.0 && p_s <= 1.0)) throw std::invalid_argument("tts: p_s must lie in [0, 1]");
    if (!(p_t > 0.0 && p_t < 1.0)) throw std::invalid_argument("tts: p_t must lie in (0, 1)");
    if (!(t_run > 0.0)) throw std::invalid_argument("tts: t_run must be positive");
    if (p_s == 0.0) return std::numeric_limits<double>::infinity();
    if (p_s >= p_t) return t_run;
    return t_run * std::log1p(-p_t) / std::log1p(-p_s);
}

bool is_success(double e, double e_ref, const Threshold& threshold) {
    if (threshold.kind == ThresholdKind::Absolute) return e <= e_ref + threshold.value;
    return e_approx(e, e_ref) <= threshold.value;
}

double time_to_target(std::span<const double> run_energies, double e_ref, const Threshold& threshold, double p_t,
                      double t_run) {
    if (run_energies.empty()) throw std::invalid_argument("time_to_target: no runs observed");
    const auto hits = std::count_if(run_energies.begin(), run_energies.end(),
                                    [&](double e) { return is_success(e, e_ref, threshold); });
    return tts(static_cast<double>(hits) / static_cast<double>(run_energies.size()), p_t, t_run);
}

DiversityResult diversity(std::span<const SpinConfig> states, std::span<const double> energies, double e_best,
                          double a_r, double r, int restarts, std::uint64_t seed) {
    if (states.size() != energies.size()) throw DimensionError("diversity: states and energies differ in length");
    if (restarts < 1) throw std::invalid_argument("diversity: restarts must be >= 1");
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("diversity: R must lie in (0, 1]");
    if (states.empty()) return {};
    const auto n = states.front().size();
    for (const auto& s : states)
        if (s.size() != n) throw DimensionError("diversity: states differ in length");

    std::vector<int> eligible;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (e_approx(energies[i], e_best) <= a_r) eligible.push_back(static_cast<int>(i));
    if (eligible.empty()) return {};

    const double min_distance = r * static_cast<double>(n);
    Rng rng(seed);
    DiversityResult best;
    std::vector<int> order = eligible;
    for (int restart = 0; restart < restarts; ++restart) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        std::vector<int> chosen;
        for (int idx : order) {
            const bool independent = std::all_of(chosen.begin(), chosen.end(), [&](int other) {
                return hamming(states[idx], states[other]) >= min_distance;
            });
            if (independent) chosen.push_back(idx);
        }
        if (static_cast<int>(chosen.size()) > best.size) {
            best.size = static_cast<int>(chosen.size());
            best.witness = chosen;
        }
    }
    std::sort(best.witness.begin(), best.witness.end());
    return best;
}

double d_approx(int d_solver, int d_total) {
    if (d_total <= 0) return 0.0;
    return static_cast<double>(d_solver) / static_cast<double>(d_total);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

}  // namespace spinbench
