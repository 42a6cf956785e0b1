// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stochastic heuristics: simulated annealing, parallel annealing, discrete
// simulated bifurcation, and greedy steepest descent.
//
// Replica r of a run seeded with `seed` draws from Rng(derive_seed(seed, r)),
// so results do not depend on the number of worker threads.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "spinbench/model.hpp"
#include "spinbench/rng.hpp"
#include "spinbench/sample_set.hpp"

namespace spinbench {

/// sign with sign(0) = +1.
inline double sign_pm(double x) { return x < 0.0 ? -1.0 : 1.0; }

inline double clip(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

/// Metropolis rule: 1 for dE < 0, exp(-beta dE) otherwise.
double metropolis_acceptance(double beta, double delta_e);

/// Called after every step with the analog positions of one replica.
using TrajectoryObserver = std::function<void(int replica, int step, const Eigen::VectorXd& x)>;

/// Single-spin-flip Metropolis chain with a cached local field; remembers
/// the lowest-energy state visited.
class MetropolisChain {
  public:
    MetropolisChain(const IsingModel& model, SpinConfig start);

    /// `proposals` flips of uniformly chosen spins at inverse temperature beta.
    void run(double beta, long proposals, Rng& rng);

    const SpinConfig& spins() const noexcept { return s_; }
    const SpinConfig& best() const noexcept { return best_; }
    double best_energy() const noexcept { return best_e_; }

  private:
    const IsingModel* model_;
    SpinConfig s_;
    std::vector<double> lf_;
    double e_ = 0.0;
    SpinConfig best_;
    double best_e_ = 0.0;
};

enum class TemperatureSchedule { Geometric, Linear };

struct SaParams {
    double t0 = 3.0;
    /// Temperature steps K.
    int steps = 300;
    /// Sweeps of N single-spin proposals per temperature.
    int sweeps = 1;
    TemperatureSchedule schedule = TemperatureSchedule::Geometric;
    double alpha = 0.97;
    /// Final temperature of the linear schedule.
    double t_final = 0.05;
    int replicas = 16;
};

void validate(const SaParams& p);

/// Best configuration seen by each replica.
SampleSet simulated_annealing(const IsingModel& model, const SaParams& params, std::uint64_t seed, int workers = 1);

struct PaParams {
    double alpha = 0.1;
    /// Defaults to 1 - alpha.
    std::optional<double> momentum;
    int steps = 500;
    int replicas = 32;
    /// lambda(t) = lambda0 * (1 - t / (steps - 1))^lambda_power; lambda0
    /// defaults to twice the largest row sum of |J| + |h|.
    std::optional<double> lambda0;
    double lambda_power = 1.0;
};

void validate(const PaParams& p);
double default_lambda0(const IsingModel& model);

/// Best configuration seen along each trajectory.
SampleSet parallel_annealing(const IsingModel& model, const PaParams& params, std::uint64_t seed, int workers = 1,
                             const TrajectoryObserver& observer = {});

struct SbParams {
    double a0 = 1.0;
    /// Defaults to 0.7 a0 / (sigma_J sqrt(N)).
    std::optional<double> c0;
    double dt = 1.0;
    int steps = 1000;
    /// a(t) = a0 (t / T)^ramp_power; 0 holds a at a0.
    double ramp_power = 1.0;
    int replicas = 64;
};

void validate(const SbParams& p);

/// Standard deviation of the off-diagonal entries of the symmetric coupling matrix.
double coupling_std(const IsingModel& model);
/// Throws std::invalid_argument when sigma_J is zero.
double default_c0(const IsingModel& model, double a0);

/// Inelastic wall: (sign(x), 0) when |x| > 1.
inline std::pair<double, double> wall(double x, double y) {
    return std::abs(x) > 1.0 ? std::pair{sign_pm(x), 0.0} : std::pair{x, y};
}

/// Final binarized position of each replica.
SampleSet simulated_bifurcation(const IsingModel& model, const SbParams& params, std::uint64_t seed, int workers = 1,
                                const TrajectoryObserver& observer = {});

/// Flips the spin with the most negative energy change (lowest index on
/// ties) until no flip lowers the energy.
SpinConfig steepest_descent(const IsingModel& model, const SpinConfig& start);

/// Steepest descent from `replicas` uniformly random starts.
SampleSet descent_from_random(const IsingModel& model, int replicas, std::uint64_t seed, int workers = 1);

}  // namespace spinbench
