// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/annealers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "spinbench/rng.hpp"

namespace spinbench {

namespace {

using Clock = std::chrono::steady_clock;

SpinConfig random_spins(int n, Rng& rng) {
    SpinConfig s(n);
    for (int i = 0; i < n; ++i) s[i] = static_cast<std::int8_t>(rng.spin());
    return s;
}

/// Runs one replica per index and packs the results into a timed SampleSet.
template <class Replica>
SampleSet run_replicas(const IsingModel& model, std::string solver, std::uint64_t seed, int replicas, int workers,
                       Replica&& replica) {
    SampleSet set;
    set.solver = std::move(solver);
    set.seed = seed;
    set.records.resize(replicas);
    const auto t0 = Clock::now();
    parallel_for(replicas, workers, [&](int r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        SpinConfig s = replica(r, rng);
        const double e = energy(model, s);
        set.records[r] = {std::move(s), e, r};
    });
    const double total = std::chrono::duration<double>(Clock::now() - t0).count();
    set.run_time = std::max(total / std::max(1, replicas), 1e-9);
    return set;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double metropolis_acceptance(double beta, double delta_e) {
    if (delta_e < 0.0) return 1.0;
    return std::exp(-beta * delta_e);
}

void validate(const SaParams& p) {
    require(p.t0 > 0.0, "SA: t0 must be positive");
    require(p.steps >= 1 && p.sweeps >= 1 && p.replicas >= 1, "SA: steps, sweeps and replicas must be >= 1");
    require(p.alpha > 0.0 && p.alpha < 1.0, "SA: alpha must lie in (0, 1)");
    require(p.t_final > 0.0, "SA: t_final must be positive");
}

MetropolisChain::MetropolisChain(const IsingModel& model, SpinConfig start)
    : model_(&model), s_(std::move(start)), lf_(static_cast<std::size_t>(model.num_spins())) {
    check_length(model, s_);
    for (int i = 0; i < model.num_spins(); ++i) lf_[i] = model.local_field(i, s_);
    e_ = energy(model, s_);
    best_ = s_;
    best_e_ = e_;
}

void MetropolisChain::run(double beta, long proposals, Rng& rng) {
    const int n = model_->num_spins();
    if (n == 0) return;
    for (long m = 0; m < proposals; ++m) {
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const double de = -2.0 * s_[i] * lf_[i];
        if (de < 0.0 || rng.uniform() < std::exp(-beta * de)) {
            s_[i] = static_cast<std::int8_t>(-s_[i]);
            const double twice = 2.0 * s_[i];
            for (const auto& nb : model_->neighbors(i)) lf_[nb.index] += twice * nb.coupling;
            e_ += de;
            if (e_ < best_e_) {
                best_e_ = e_;
                best_ = s_;
            }
        }
    }
}

SampleSet simulated_annealing(const IsingModel& model, const SaParams& params, std::uint64_t seed, int workers) {
    validate(params);
    const int n = model.num_spins();
    return run_replicas(model, "sa", seed, params.replicas, workers, [&](int, Rng& rng) {
        MetropolisChain chain(model, random_spins(n, rng));
        double t = params.t0;
        const long proposals = static_cast<long>(params.sweeps) * n;
        for (int k = 0; k < params.steps; ++k) {
            chain.run(1.0 / t, proposals, rng);
            if (params.schedule == TemperatureSchedule::Geometric) {
                t *= params.alpha;
            } else {
                const double frac = params.steps > 1 ? double(k + 1) / (params.steps - 1) : 1.0;
                t = params.t0 + (params.t_final - params.t0) * std::min(frac, 1.0);
            }
        }
        return chain.best();
    });
}

void validate(const PaParams& p) {
    require(p.alpha > 0.0 && p.alpha <= 1.0, "PA: alpha must lie in (0, 1]");
    const double beta = p.momentum.value_or(1.0 - p.alpha);
    require(beta >= 0.0 && beta < 1.0, "PA: momentum must lie in [0, 1)");
    require(p.steps >= 1 && p.replicas >= 1, "PA: steps and replicas must be >= 1");
    require(!p.lambda0 || *p.lambda0 >= 0.0, "PA: lambda0 must be non-negative");
    require(p.lambda_power > 0.0, "PA: lambda_power must be positive");
}

double default_lambda0(const IsingModel& model) {
    double worst = 0.0;
    for (int i = 0; i < model.num_spins(); ++i) {
        double row = std::abs(model.field(i));
        for (const auto& nb : model.neighbors(i)) row += std::abs(nb.coupling);
        worst = std::max(worst, row);
    }
    return 2.0 * worst;
}

SampleSet parallel_annealing(const IsingModel& model, const PaParams& params, std::uint64_t seed, int workers,
                             const TrajectoryObserver& observer) {
    validate(params);
    const int n = model.num_spins();
    const double alpha = params.alpha;
    const double beta = params.momentum.value_or(1.0 - alpha);
    const double lambda0 = params.lambda0.value_or(default_lambda0(model));
    return run_replicas(model, "pa", seed, params.replicas, workers, [&](int r, Rng& rng) {
        SpinConfig s = random_spins(n, rng);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd grad(n);
        SpinConfig best = s;
        double best_e = energy(model, s);
        for (int t = 0; t < params.steps; ++t) {
            const double frac = params.steps > 1 ? double(t) / (params.steps - 1) : 0.0;
            const double lambda = lambda0 * std::pow(1.0 - frac, params.lambda_power);
            for (int i = 0; i < n; ++i) grad[i] = model.local_field(i, s) + lambda * x[i];
            for (int i = 0; i < n; ++i) {
                m[i] = clip(beta * m[i] - alpha * grad[i], -1.0, 1.0);
                x[i] = clip(x[i] + m[i], -1.0, 1.0);
                s[i] = static_cast<std::int8_t>(sign_pm(x[i]));
            }
            if (observer) observer(r, t, x);
            const double e = energy(model, s);
            if (e < best_e) {
                best_e = e;
                best = s;
            }
        }
        return best;
    });
}

void validate(const SbParams& p) {
    require(p.a0 > 0.0, "SB: a0 must be positive");
    require(!p.c0 || *p.c0 > 0.0, "SB: c0 must be positive");
    require(p.dt > 0.0, "SB: dt must be positive");
    require(p.steps >= 1 && p.replicas >= 1, "SB: steps and replicas must be >= 1");
    require(p.ramp_power >= 0.0, "SB: ramp_power must be non-negative");
}

double coupling_std(const IsingModel& model) {
    const double n = model.num_spins();
    const double count = n * (n - 1.0);
    if (count <= 0.0) return 0.0;
    double sum = 0.0, sq = 0.0;
    for (const auto& c : model.couplings()) {
        sum += 2.0 * c.value;
        sq += 2.0 * c.value * c.value;
    }
    const double mean = sum / count;
    return std::sqrt(std::max(0.0, sq / count - mean * mean));
}

double default_c0(const IsingModel& model, double a0) {
    const double sigma = coupling_std(model);
    if (!(sigma > 0.0))
        throw std::invalid_argument("SB: off-diagonal couplings have zero spread; supply c0 explicitly");
    return 0.7 * a0 / (sigma * std::sqrt(static_cast<double>(model.num_spins())));
}

SampleSet simulated_bifurcation(const IsingModel& model, const SbParams& params, std::uint64_t seed, int workers,
                                const TrajectoryObserver& observer) {
    validate(params);
    const int n = model.num_spins();
    const double a0 = params.a0;
    const double c0 = params.c0 ? *params.c0 : default_c0(model, a0);
    const double dt = params.dt;
    return run_replicas(model, "sbm", seed, params.replicas, workers, [&](int r, Rng& rng) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.uniform(-0.1, 0.1);
        Eigen::VectorXd sx(n);
        for (int k = 0; k < params.steps; ++k) {
            const double a = a0 * std::pow(double(k) / params.steps, params.ramp_power);
            for (int i = 0; i < n; ++i) sx[i] = sign_pm(x[i]);
            for (int i = 0; i < n; ++i) {
                const double g = -model.local_field(i, sx);
                y[i] += (-(a0 - a) * x[i] + c0 * g) * dt;
            }
            for (int i = 0; i < n; ++i) {
                x[i] += a0 * y[i] * dt;
                std::tie(x[i], y[i]) = wall(x[i], y[i]);
            }
            if (observer) observer(r, k, x);
        }
        SpinConfig s(n);
        for (int i = 0; i < n; ++i) s[i] = static_cast<std::int8_t>(sign_pm(x[i]));
        return s;
    });
}

SpinConfig steepest_descent(const IsingModel& model, const SpinConfig& start) {
    check_length(model, start);
    spins_to_binary(start);
    SpinConfig s = start;
    const int n = model.num_spins();
    for (;;) {
        int pick = -1;
        double best = -1e-12;
        for (int i = 0; i < n; ++i) {
            const double de = flip_delta(model, s, i);
            if (de < best) {
                best = de;
                pick = i;
            }
        }
        if (pick < 0) return s;
        s[pick] = static_cast<std::int8_t>(-s[pick]);
    }
}

SampleSet descent_from_random(const IsingModel& model, int replicas, std::uint64_t seed, int workers) {
    require(replicas >= 1, "descent: replicas must be >= 1");
    return run_replicas(model, "descent", seed, replicas, workers, [&](int, Rng& rng) {
        return steepest_descent(model, random_spins(model.num_spins(), rng));
    });
}

}  // namespace spinbench
