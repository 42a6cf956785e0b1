// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace spinbench {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

/// Distinct values of s_i (h_i + sum_j J_ij s_j) with multiplicities.
std::vector<std::pair<double, double>> local_terms(const IsingModel& model, std::span<const SpinConfig> samples) {
    if (samples.empty()) throw std::invalid_argument("pseudo-likelihood needs at least one sample");
    if (model.num_spins() == 0) throw std::invalid_argument("pseudo-likelihood needs a nonempty model");
    std::map<double, double> counts;
    for (const auto& s : samples) {
        check_length(model, s);
        for (int i = 0; i < model.num_spins(); ++i) counts[s[i] * model.local_field(i, s)] += 1.0;
    }
    return {counts.begin(), counts.end()};
}

double evaluate(const std::vector<std::pair<double, double>>& terms, double total, double beta) {
    double acc = 0.0;
    for (const auto& [f, w] : terms) acc += w * softplus(2.0 * beta * f);
    return -acc / total;
}

}  // namespace

double pseudo_log_likelihood(const IsingModel& model, std::span<const SpinConfig> samples, double beta) {
    const auto terms = local_terms(model, samples);
    return evaluate(terms, static_cast<double>(model.num_spins()) * samples.size(), beta);
}

BetaEstimate pseudo_likelihood_beta(const IsingModel& model, std::span<const SpinConfig> samples, double beta_max,
                                    double tol) {
    if (!(beta_max > 0.0)) throw std::invalid_argument("beta_max must be positive");
    const auto terms = local_terms(model, samples);
    if (std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.first == 0.0; }))
        throw DegenerateDataError("pseudo-likelihood is constant in beta: every local term is zero");
    const double total = static_cast<double>(model.num_spins()) * samples.size();
    auto f = [&](double b) { return evaluate(terms, total, b); };

    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = beta_max;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    BetaEstimate est;
    est.beta = 0.5 * (a + b);
    est.log_likelihood = f(est.beta);
    // Compare against the bracket ends, which the interior search never evaluates.
    const double f_hi = f(beta_max), f_lo = f(0.0);
    if (f_hi >= est.log_likelihood) {
        est.beta = beta_max;
        est.log_likelihood = f_hi;
    } else if (f_lo >= est.log_likelihood) {
        est.beta = 0.0;
        est.log_likelihood = f_lo;
    }
    est.boundary_hit = est.beta <= 2.0 * tol || est.beta >= beta_max - 2.0 * tol;
    return est;
}

EnergyChangeStats energy_change_stats(std::span<const double> delta_e1) {
    if (delta_e1.size() < 2) throw std::invalid_argument("energy change statistics need at least two runs");
    EnergyChangeStats s;
    s.count = delta_e1.size();
    for (double x : delta_e1) {
        s.mean += x;
        s.second_moment += x * x;
    }
    s.mean /= static_cast<double>(s.count);
    s.second_moment /= static_cast<double>(s.count);
    return s;
}

EnergyChangeStats energy_change_stats(const IsingModel& model, std::span<const SpinConfig> initial,
                                      std::span<const SpinConfig> final_states) {
    if (initial.size() != final_states.size()) throw DimensionError("initial and final sample counts differ");
    std::vector<double> de(initial.size());
    for (std::size_t k = 0; k < initial.size(); ++k) de[k] = energy(model, final_states[k]) - energy(model, initial[k]);
    return energy_change_stats(de);
}

double tur_g(double x) {
    if (std::abs(x) >= 1.0) return std::numeric_limits<double>::infinity();
    return x * std::atanh(x);
}

ThermoBounds tur_bounds(const EnergyChangeStats& stats, double beta1, double beta2, int num_spins) {
    if (!(beta1 > 0.0 && beta2 > 0.0)) throw std::invalid_argument("tur_bounds: inverse temperatures must be positive");
    if (num_spins < 1) throw std::invalid_argument("tur_bounds: num_spins must be >= 1");
    if (!(stats.second_moment > 0.0)) throw DegenerateDataError("tur_bounds: second moment of Delta E_1 is zero");
    ThermoBounds b;
    b.ratio = std::clamp(stats.mean / std::sqrt(stats.second_moment), -1.0, 1.0);
    const double g = tur_g(b.ratio);
    b.sigma_lb = 2.0 * g;
    if (std::isinf(g)) {
        b.heat_lb = b.work_lb = std::numeric_limits<double>::infinity();
    } else {
        b.heat_lb = 2.0 / beta2 * g - beta1 / beta2 * stats.mean;
        b.work_lb = 2.0 / beta2 * g + (1.0 - beta1 / beta2) * stats.mean;
    }
    b.heat_lb_per_spin = b.heat_lb / num_spins;
    b.work_lb_per_spin = b.work_lb / num_spins;
    return b;
}

std::string to_string(OperatingMode m) {
    switch (m) {
        case OperatingMode::Refrigerator: return "refrigerator";
        case OperatingMode::Engine: return "engine";
        case OperatingMode::Accelerator: return "accelerator";
        case OperatingMode::Heater: return "heater";
    }
    return "?";
}

OperatingMode classify_mode(double de1, double de2, double w) {
    auto ge = [](double v) { return v >= 0.0; };
    auto le = [](double v) { return v < 0.0; };
    if (ge(de1) && le(de2) && ge(w)) return OperatingMode::Refrigerator;
    if (le(de1) && ge(de2) && le(w)) return OperatingMode::Engine;
    if (le(de1) && ge(de2) && ge(w)) return OperatingMode::Accelerator;
    if (ge(de1) && ge(de2) && ge(w)) return OperatingMode::Heater;
    throw DomainError("sign pattern (" + std::to_string(de1) + ", " + std::to_string(de2) + ", " + std::to_string(w) +
                      ") matches no operating mode");
}

std::optional<OperatingMode> infer_mode(double de1, const ThermoBounds& bounds) {
    if (de1 >= 0.0) {
        // <dE2> >= heat_lb, so a non-negative heat bound rules out the refrigerator.
        if (bounds.heat_lb >= 0.0) return OperatingMode::Heater;
        return std::nullopt;
    }
    // With <dE1> < 0 and <Sigma> >= 0, <dE2> > 0; the sign of <W> decides.
    if (bounds.work_lb >= 0.0) return OperatingMode::Accelerator;
    return std::nullopt;
}

double success_probability(std::span<const SpinConfig> samples, std::span<const SpinConfig> ground_states) {
    if (samples.empty()) throw std::invalid_argument("success_probability: no samples");
    std::size_t hits = 0;
    for (const auto& s : samples)
        if (std::any_of(ground_states.begin(), ground_states.end(), [&](const SpinConfig& g) { return g == s; })) ++hits;
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double solution_quality(std::span<const double> energies, double e_star) {
    if (energies.empty()) throw std::invalid_argument("solution_quality: no samples");
    if (e_star == 0.0) throw UndefinedMetricError("solution_quality is undefined for E* = 0");
    double acc = 0.0;
    for (double e : energies) acc += e / e_star;
    return acc / static_cast<double>(energies.size());
}

Efficiencies efficiencies(double p_gs, double work_lb, double heat_lb) {
    if (!(work_lb > 0.0)) throw std::invalid_argument("efficiencies: work bound must be positive");
    if (heat_lb == 0.0) throw std::invalid_argument("efficiencies: heat bound must be nonzero");
    return {p_gs / work_lb, work_lb / heat_lb};
}

}  // namespace spinbench
