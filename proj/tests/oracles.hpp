// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the tests. Nothing here
// calls into the incremental or tensor-network code paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spinbench/instances.hpp"
#include "spinbench/model.hpp"

namespace oracle {

using spinbench::IsingModel;
using spinbench::SpinConfig;

/// Dense upper-triangular J and h, summed in a different order than energy().
struct Dense {
    Eigen::MatrixXd j;
    Eigen::VectorXd h;
};

inline Dense dense(const IsingModel& m) {
    Dense d{Eigen::MatrixXd::Zero(m.num_spins(), m.num_spins()), m.fields()};
    for (const auto& c : m.couplings()) d.j(c.i, c.j) = c.value;
    return d;
}

inline double naive_energy(const Dense& d, const SpinConfig& s) {
    double e = 0.0;
    const int n = static_cast<int>(d.h.size());
    for (int i = n - 1; i >= 0; --i) {
        e += d.h[i] * s[i];
        for (int j = n - 1; j > i; --j) e += d.j(i, j) * s[i] * s[j];
    }
    return e;
}

/// Config for integer k: spin 0 is the top bit, bit 1 means +1.
inline SpinConfig config(int n, std::uint64_t k) {
    SpinConfig s(n);
    for (int i = 0; i < n; ++i) s[i] = ((k >> (n - 1 - i)) & 1U) ? 1 : -1;
    return s;
}

struct State {
    SpinConfig s;
    double e;
    std::uint64_t k;
};

/// Every state sorted by (energy, index); index order is lexicographic with -1 < +1.
inline std::vector<State> enumerate(const IsingModel& m) {
    const Dense d = dense(m);
    const int n = m.num_spins();
    std::vector<State> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
        SpinConfig s = config(n, k);
        out.push_back({s, naive_energy(d, s), k});
    }
    std::stable_sort(out.begin(), out.end(), [](const State& a, const State& b) {
        if (a.e != b.e) return a.e < b.e;
        return a.k < b.k;
    });
    return out;
}

inline double naive_log_z(const IsingModel& m, double beta) {
    const auto states = enumerate(m);
    const double shift = -beta * states.front().e;
    long double acc = 0.0L;
    for (const auto& st : states) acc += std::exp(static_cast<long double>(-beta * st.e - shift));
    return static_cast<double>(std::log(acc)) + shift;
}

/// p(s_target = +1 | fixed) by brute summation; fixed[i] == 0 means free.
inline double naive_conditional_plus(const IsingModel& m, double beta, const std::vector<int>& fixed, int target) {
    const Dense d = dense(m);
    const int n = m.num_spins();
    long double num = 0.0L, den = 0.0L;
    const double e0 = naive_energy(d, config(n, 0));
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
        SpinConfig s = config(n, k);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            if (fixed[i] != 0 && s[i] != fixed[i]) ok = false;
        if (!ok) continue;
        const long double w = std::exp(static_cast<long double>(-beta * (naive_energy(d, s) - e0)));
        den += w;
        if (s[target] == 1) num += w;
    }
    return static_cast<double>(num / den);
}

inline IsingModel random_model(int n, double density, bool fields, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
    std::vector<spinbench::Coupling> cs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(gen) < density) cs.push_back({i, j, u(gen)});
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    if (fields)
        for (int i = 0; i < n; ++i) h[i] = u(gen);
    return IsingModel(n, std::move(cs), h);
}

/// Worked three-spin instance: H = J12 s1 s2 + J13 s1 s3 + J23 s2 s3 + h . s.
inline IsingModel three_spin_example() {
    return IsingModel(3, {{0, 1, 1.0}, {0, 2, 0.5}, {1, 2, -0.75}}, Eigen::Vector3d(1.0, -1.0, 1.5));
}

}  // namespace oracle
