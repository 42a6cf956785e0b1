// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spinbench/errors.hpp"
#include "spinbench/exact.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/rng.hpp"
#include "spinbench/thermo.hpp"

using namespace spinbench;

namespace {

std::vector<SpinConfig> gibbs_samples(const IsingModel& m, double beta, int count, std::uint64_t seed) {
    const auto g = gibbs_table(m, beta);
    std::vector<double> cdf(static_cast<std::size_t>(g.probabilities.size()));
    double acc = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) cdf[k] = acc += g.probabilities[static_cast<Eigen::Index>(k)];
    Rng rng(seed);
    std::vector<SpinConfig> out;
    for (int d = 0; d < count; ++d) {
        const double u = rng.uniform() * acc;
        const auto k = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        out.push_back(config_from_index(m.num_spins(), std::min<std::uint64_t>(k, cdf.size() - 1)));
    }
    return out;
}

/// Outcomes (+e1, +e2) and (-e1, -e2) weighted so that P(x)/P(-x) = exp(b1 e1 + b2 e2).
struct ExchangePair {
    double e1, e2, weight;
};

struct ExchangeTruth {
    double de1 = 0, de1_sq = 0, de2 = 0;
};

ExchangeTruth moments(const std::vector<ExchangePair>& pairs, double b1, double b2) {
    ExchangeTruth t;
    double total = 0.0;
    for (const auto& p : pairs) total += p.weight;
    for (const auto& p : pairs) {
        const double sigma = b1 * p.e1 + b2 * p.e2;
        const double w = p.weight / total;
        // P(+) - P(-) for the pair, normalized to the pair's weight.
        const double bias = std::tanh(0.5 * sigma);
        t.de1 += w * bias * p.e1;
        t.de2 += w * bias * p.e2;
        t.de1_sq += w * p.e1 * p.e1;
    }
    return t;
}

bool at_least(double truth, double bound, double scale) { return truth >= bound - 1e-12 * std::max(1.0, scale); }

/// First-order effect on 2 g(r) of rounding r to double: |d(2g)/dr| * |r| * 8 eps.
/// Saturated pairs have 1 - r^2 near eps, where this dominates.
double ratio_rounding(double r) {
    const double a = std::abs(r);
    return 2.0 * (std::atanh(a) + a / (1.0 - a * a)) * a * 8.0 * std::numeric_limits<double>::epsilon();
}

}  // namespace

TEST(PseudoLikelihood, ZeroBetaIsMinusLn2) {
    std::mt19937_64 gen(81);
    const auto m = oracle::random_model(7, 0.5, true, gen);
    const auto samples = gibbs_samples(m, 1.0, 50, 3);
    EXPECT_NEAR(pseudo_log_likelihood(m, samples, 0.0), -std::numbers::ln2, 1e-12);
}

TEST(PseudoLikelihood, RecoversGibbsTemperature) {
    const auto m = generate(InstanceClass::RAU, LatticeSpec{2, 3, 2, true}, 12);
    ASSERT_EQ(m.num_spins(), 12);
    const auto samples = gibbs_samples(m, 1.0, 10000, 17);
    const auto est = pseudo_likelihood_beta(m, samples);
    EXPECT_NEAR(est.beta, 1.0, 0.05);
    EXPECT_FALSE(est.boundary_hit);
    EXPECT_NEAR(est.log_likelihood, pseudo_log_likelihood(m, samples, est.beta), 1e-12);
}

TEST(PseudoLikelihood, MatchesConditionalsFromFullEnergies) {
    std::mt19937_64 gen(82);
    const auto m = oracle::random_model(6, 0.6, true, gen);
    const auto d = oracle::dense(m);
    const auto samples = gibbs_samples(m, 0.7, 40, 4);
    const double beta = 0.9;
    double direct = 0.0;
    for (const auto& s : samples)
        for (int i = 0; i < 6; ++i) {
            SpinConfig t = s;
            t[i] = static_cast<std::int8_t>(-t[i]);
            const double keep = -beta * oracle::naive_energy(d, s), flip = -beta * oracle::naive_energy(d, t);
            direct += keep - std::max(keep, flip) - std::log(1.0 + std::exp(-std::abs(keep - flip)));
        }
    direct /= 6.0 * static_cast<double>(samples.size());
    EXPECT_NEAR(pseudo_log_likelihood(m, samples, beta), direct, 1e-12);
}

TEST(PseudoLikelihood, OrderedDataHitsTheBoundary) {
    const auto m = oracle::three_spin_example();
    const auto ground = brute_force(m, 1).states[0].config;
    const std::vector<SpinConfig> samples(20, ground);
    const auto est = pseudo_likelihood_beta(m, samples, 30.0);
    EXPECT_TRUE(est.boundary_hit);
    EXPECT_NEAR(est.beta, 30.0, 1e-6);
}

TEST(PseudoLikelihood, Errors) {
    const IsingModel flat(3, {});
    const std::vector<SpinConfig> samples(4, oracle::config(3, 5));
    EXPECT_THROW(pseudo_likelihood_beta(flat, samples), DegenerateDataError);
    EXPECT_THROW(pseudo_likelihood_beta(oracle::three_spin_example(), std::vector<SpinConfig>{}), std::invalid_argument);
}

TEST(Tur, GProperties) {
    EXPECT_NEAR(tur_g(0.5), 0.27465307216702745, 1e-9);
    EXPECT_EQ(tur_g(0.0), 0.0);
    EXPECT_TRUE(std::isinf(tur_g(1.0)));
    double prev = 0.0;
    for (double x = 0.01; x < 1.0; x += 0.01) {
        EXPECT_EQ(tur_g(x), tur_g(-x));
        EXPECT_GT(tur_g(x), prev);
        // Midpoint convexity.
        EXPECT_LE(tur_g(x - 0.005), 0.5 * (tur_g(x - 0.01) + tur_g(x)) + 1e-15);
        prev = tur_g(x);
    }
}

TEST(Tur, ZeroMeanGivesZeroBounds) {
    const std::vector<double> de{-1.0, 1.0, -2.0, 2.0};
    const auto b = tur_bounds(energy_change_stats(de), 1.0, 2.0);
    EXPECT_EQ(b.sigma_lb, 0.0);
    EXPECT_EQ(b.heat_lb, 0.0);
    EXPECT_EQ(b.work_lb, 0.0);
}

TEST(Tur, ClosedFormAndPerSpin) {
    const EnergyChangeStats s{-0.5, 1.0, 10};
    const auto b = tur_bounds(s, 2.0, 4.0, 5);
    const double g = 0.5 * std::atanh(0.5);
    EXPECT_NEAR(b.ratio, -0.5, 1e-15);
    EXPECT_NEAR(b.sigma_lb, 2.0 * g, 1e-12);
    EXPECT_NEAR(b.heat_lb, 0.5 * g + 0.5 * 0.5, 1e-12);
    EXPECT_NEAR(b.work_lb, 0.5 * g - 0.5 * 0.5, 1e-12);
    EXPECT_NEAR(b.heat_lb_per_spin, b.heat_lb / 5.0, 1e-15);
    EXPECT_NEAR(b.work_lb_per_spin, b.work_lb / 5.0, 1e-15);
}

TEST(Tur, SaturatedRatioAndErrors) {
    const auto b = tur_bounds({2.0, 4.0, 3}, 1.0, 1.0);
    EXPECT_TRUE(std::isinf(b.sigma_lb));
    EXPECT_THROW(tur_bounds({0.0, 0.0, 3}, 1.0, 1.0), DegenerateDataError);
    EXPECT_THROW(tur_bounds({0.1, 1.0, 3}, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(energy_change_stats(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Tur, StatsFromConfigurations) {
    const auto m = oracle::three_spin_example();
    const std::vector<SpinConfig> a{oracle::config(3, 0), oracle::config(3, 7), oracle::config(3, 3)};
    const std::vector<SpinConfig> b{oracle::config(3, 2), oracle::config(3, 7), oracle::config(3, 1)};
    const auto s = energy_change_stats(m, a, b);
    std::vector<double> de;
    for (int k = 0; k < 3; ++k) de.push_back(energy(m, b[k]) - energy(m, a[k]));
    const auto t = energy_change_stats(de);
    EXPECT_EQ(s.count, 3u);
    EXPECT_NEAR(s.mean, t.mean, 1e-15);
    EXPECT_NEAR(s.second_moment, t.second_moment, 1e-15);
}

TEST(Tur, TwoOutcomeExchangeModels) {
    Rng rng(91);
    int violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const double b1 = rng.uniform(0.05, 5.0), b2 = rng.uniform(0.05, 5.0);
        const std::vector<ExchangePair> pair{{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), 1.0}};
        const auto t = moments(pair, b1, b2);
        const auto b = tur_bounds({t.de1, t.de1_sq, 2}, b1, b2);
        const double sigma = b1 * t.de1 + b2 * t.de2, heat = t.de2, work = t.de1 + t.de2;
        const double scale = std::abs(b1 * t.de1) + std::abs(b2 * t.de2) + std::abs(t.de1) + std::abs(t.de2);
        const double slack = ratio_rounding(b.ratio);
        if (!at_least(sigma + slack, b.sigma_lb, scale) || !at_least(heat + slack / b2, b.heat_lb, scale) ||
            !at_least(work + slack / b2, b.work_lb, scale))
            ++violations;
        EXPECT_GE(b.sigma_lb, 0.0);
    }
    EXPECT_EQ(violations, 0);
}

TEST(Tur, MixturesOfExchangePairs) {
    Rng rng(92);
    for (int rep = 0; rep < 2000; ++rep) {
        const double b1 = rng.uniform(0.05, 5.0), b2 = rng.uniform(0.05, 5.0);
        std::vector<ExchangePair> pairs;
        for (int k = 0; k < 4; ++k) pairs.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.1, 1)});
        const auto t = moments(pairs, b1, b2);
        const auto b = tur_bounds({t.de1, t.de1_sq, 8}, b1, b2);
        const double scale = std::abs(b1 * t.de1) + std::abs(b2 * t.de2) + 1.0;
        EXPECT_TRUE(at_least(b1 * t.de1 + b2 * t.de2, b.sigma_lb, scale));
        EXPECT_TRUE(at_least(t.de2, b.heat_lb, scale));
        EXPECT_TRUE(at_least(t.de1 + t.de2, b.work_lb, scale));
    }
}

TEST(Modes, TableRows) {
    EXPECT_EQ(classify_mode(1.0, -0.5, 0.5), OperatingMode::Refrigerator);
    EXPECT_EQ(classify_mode(-1.0, 0.4, -0.6), OperatingMode::Engine);
    EXPECT_EQ(classify_mode(-1.0, 1.5, 0.5), OperatingMode::Accelerator);
    EXPECT_EQ(classify_mode(1.0, 0.5, 1.5), OperatingMode::Heater);
    EXPECT_EQ(classify_mode(0.0, 0.0, 0.0), OperatingMode::Heater);
    EXPECT_THROW(classify_mode(1.0, -2.0, -1.0), DomainError);
    EXPECT_EQ(to_string(OperatingMode::Refrigerator), "refrigerator");
}

TEST(Modes, InferredFromBounds) {
    ThermoBounds b;
    b.heat_lb = 0.2;
    b.work_lb = 0.3;
    EXPECT_EQ(infer_mode(0.5, b), OperatingMode::Heater);
    EXPECT_EQ(infer_mode(-0.5, b), OperatingMode::Accelerator);
    b.heat_lb = -0.1;
    EXPECT_FALSE(infer_mode(0.5, b).has_value());
    b.work_lb = -0.1;
    EXPECT_FALSE(infer_mode(-0.5, b).has_value());
}

TEST(Efficiency, SuccessAndQuality) {
    const auto g = oracle::config(3, 2);
    const std::vector<SpinConfig> ground{g};
    const std::vector<SpinConfig> all_ground(5, g);
    EXPECT_EQ(success_probability(all_ground, ground), 1.0);
    const std::vector<SpinConfig> mixed{g, oracle::config(3, 0), g, oracle::config(3, 5)};
    EXPECT_EQ(success_probability(mixed, ground), 0.5);
    EXPECT_EQ(solution_quality(std::vector<double>(4, -3.25), -3.25), 1.0);
    const std::vector<double> pooled{-3.25, -2.75, -1.0, 0.5};
    EXPECT_NEAR(solution_quality(pooled, -3.25), (1.0 + 2.75 / 3.25 + 1.0 / 3.25 - 0.5 / 3.25) / 4.0, 1e-15);
    EXPECT_THROW(solution_quality(pooled, 0.0), UndefinedMetricError);
}

TEST(Efficiency, Bounds) {
    EXPECT_EQ(efficiencies(0.0, 2.0, 1.0).eta_comp, 0.0);
    const auto e = efficiencies(0.5, 2.0, 4.0);
    EXPECT_EQ(e.eta_comp, 0.25);
    EXPECT_EQ(e.eta_th, 0.5);
    EXPECT_THROW(efficiencies(0.5, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(efficiencies(0.5, 1.0, 0.0), std::invalid_argument);
}
