// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pseudo-likelihood thermometry, thermodynamic uncertainty bounds, operating
// modes and efficiencies of an annealer viewed as a thermal machine.
//
// Units: k_B = 1, energies in the units of the Ising couplings.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinbench/model.hpp"

namespace spinbench {

/// ln-pseudo-likelihood per spin and sample under p(s) ~ exp(-beta H(s)):
/// -1/(N D) sum_{i,d} ln(1 + exp(2 beta s_i (h_i + sum_j J_ij s_j))).
double pseudo_log_likelihood(const IsingModel& model, std::span<const SpinConfig> samples, double beta);

struct BetaEstimate {
    double beta = 0.0;
    double log_likelihood = 0.0;
    /// The maximizer sits on an end of the search bracket.
    bool boundary_hit = false;
};

/// Golden-section maximization over [0, beta_max].
BetaEstimate pseudo_likelihood_beta(const IsingModel& model, std::span<const SpinConfig> samples,
                                    double beta_max = 50.0, double tol = 1e-6);

struct EnergyChangeStats {
    double mean = 0.0;
    double second_moment = 0.0;
    std::size_t count = 0;
};

EnergyChangeStats energy_change_stats(std::span<const double> delta_e1);
/// Delta E_1 per run = E(final) - E(initial).
EnergyChangeStats energy_change_stats(const IsingModel& model, std::span<const SpinConfig> initial,
                                      std::span<const SpinConfig> final_states);

/// x atanh(x); +inf at |x| = 1.
double tur_g(double x);

struct ThermoBounds {
    double ratio = 0.0;
    double sigma_lb = 0.0;
    /// Lower bound on -<Q>.
    double heat_lb = 0.0;
    /// Lower bound on <W>.
    double work_lb = 0.0;
    double heat_lb_per_spin = 0.0;
    double work_lb_per_spin = 0.0;
};

ThermoBounds tur_bounds(const EnergyChangeStats& stats, double beta1, double beta2, int num_spins = 1);

enum class OperatingMode { Refrigerator, Engine, Accelerator, Heater };

std::string to_string(OperatingMode m);

/// Table rows tried in the order R, E, A, H. An exact zero satisfies ">= 0"
/// but not "<= 0". Throws DomainError when no row matches.
OperatingMode classify_mode(double de1_mean, double de2_mean, double w_mean);

/// Mode implied by the measured <Delta E_1> and the bounds alone, or nullopt
/// when the bounds leave more than one row open.
std::optional<OperatingMode> infer_mode(double de1_mean, const ThermoBounds& bounds);

/// Fraction of samples equal to one of the ground states.
double success_probability(std::span<const SpinConfig> samples, std::span<const SpinConfig> ground_states);
/// Mean of E / E*.
double solution_quality(std::span<const double> energies, double e_star);

struct Efficiencies {
    /// P_GS / W_lb.
    double eta_comp = 0.0;
    /// W_lb / heat_lb, i.e. -<W>/<Q> evaluated on the bounds.
    double eta_th = 0.0;
};

Efficiencies efficiencies(double p_gs, double work_lb, double heat_lb);

}  // namespace spinbench
