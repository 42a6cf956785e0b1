// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark scores: approximation ratio, time-to-solution, time-to-target,
// and diversity of near-optimal solutions.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinbench/model.hpp"

namespace spinbench {

struct MetricConfig {
    double target_confidence = 0.99;
    double approximation_ratio = 0.01;
    /// Two states are independent when their Hamming distance is at least R * N.
    double independence_fraction = 0.5;
    int restarts = 100;
};

void validate(const MetricConfig& c);

/// (E - E_best) / (2 |E_best|). Negative when E beats the reference.
double e_approx(double e, double e_best);

/// t_run ln(1 - p_t) / ln(1 - p_s); +inf for p_s = 0, t_run once p_s >= p_t.
double tts(double p_s, double p_t, double t_run);

enum class ThresholdKind { Relative, Absolute };

/// Relative: success iff e_approx(E, E_ref) <= value.
/// Absolute: success iff E <= E_ref + value.
struct Threshold {
    ThresholdKind kind = ThresholdKind::Relative;
    double value = 0.01;
};

bool is_success(double e, double e_ref, const Threshold& threshold);

/// Fraction of runs meeting the threshold, plugged into tts.
double time_to_target(std::span<const double> run_energies, double e_ref, const Threshold& threshold, double p_t,
                      double t_run);

struct DiversityResult {
    int size = 0;
    /// Indices into the input of the largest independent set found.
    std::vector<int> witness;
};

/// Randomized greedy independent set over the states with e_approx <= a_r,
/// best over `restarts` shuffles.
DiversityResult diversity(std::span<const SpinConfig> states, std::span<const double> energies, double e_best,
                          double a_r, double r, int restarts, std::uint64_t seed);

/// D_solver / D_total, 0 when nothing is eligible.
double d_approx(int d_solver, int d_total);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace spinbench
