// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-system transverse-field Ising annealing:
//
//   H(s) = -A(s)/2 sum_i sigma^x_i + B(s)/2 (sum_{i<j} J_ij sigma^z_i sigma^z_j + sum_i h_i sigma^z_i)
//
// with hbar = 1. Basis index k encodes qubit i in bit (N-1-i); a zero bit is
// |up>, the +1 eigenstate of sigma^z, i.e. spin +1.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "spinbench/model.hpp"

namespace spinbench {

inline constexpr int kDynamicsSpinCap = 12;

using QuantumState = Eigen::VectorXcd;
using Distribution = Eigen::VectorXd;

/// A(s), B(s). Empty tables mean A = 1 - s, B = s; otherwise piecewise-linear
/// interpolation over increasing s, clamped at the ends.
struct Envelope {
    std::vector<double> s;
    std::vector<double> a;
    std::vector<double> b;

    double A(double x) const;
    double B(double x) const;
};

/// CSV with columns s, A, B. A non-numeric first line is taken as a header.
Envelope parse_envelope_csv(std::string_view text);

enum class ScheduleKind { Forward, Reverse, ReversePause };

struct AnnealSchedule {
    ScheduleKind kind = ScheduleKind::Forward;
    double tau = 1.0;
    /// Turning point for the reverse variants.
    double s_a = 0.5;
    Envelope envelope;

    double s(double t) const;
};

void validate(const AnnealSchedule& schedule);

/// Spins of basis state k.
SpinConfig basis_spins(int num_spins, std::uint64_t k);
std::uint64_t basis_index(const SpinConfig& s);

/// Dense 2^N x 2^N matrix at path parameter s.
Eigen::MatrixXd build_hamiltonian(const IsingModel& model, const Envelope& envelope, double s);

QuantumState plus_state(int num_spins);
QuantumState basis_state(const SpinConfig& s);

/// Magnus-4 propagation of `psi` from t0 to t1 in `steps` equal steps.
QuantumState propagate(const IsingModel& model, const AnnealSchedule& schedule, double t0, double t1, int steps,
                       const QuantumState& psi);

/// Over [0, tau]. The initial state defaults to |+>^N for the forward schedule;
/// the reverse variants require a classical starting configuration.
QuantumState evolve(const IsingModel& model, const AnnealSchedule& schedule, int steps,
                    const std::optional<SpinConfig>& initial = std::nullopt);

Distribution measure(const QuantumState& psi);

/// Probability mass on the given configurations.
double ground_state_probability(const Distribution& dist, std::span<const SpinConfig> ground_states);

/// Average of the measured distributions over `draws` coupling perturbations
/// J_ij + N(0, sigma). sigma = 0 is a single clean run.
Distribution ice_ensemble(const IsingModel& model, double sigma, int draws, const AnnealSchedule& schedule, int steps,
                          std::uint64_t seed, const std::optional<SpinConfig>& initial = std::nullopt,
                          int workers = 1);

/// Throws std::invalid_argument unless entries are >= 0 and sum to 1 within 1e-6.
void check_distribution(const Distribution& p);

double tvd(const Distribution& p, const Distribution& q);
/// (sum sqrt(p q))^2.
double classical_fidelity(const Distribution& p, const Distribution& q);

}  // namespace spinbench
