// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>


#include "spinbench/rng.hpp"
#include "spinbench/sample_set.hpp"

namespace spinbench {

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto k = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

void check_cap(const IsingModel& model) {
    if (model.num_spins() < 1) throw std::invalid_argument("dynamics needs at least one spin");
    if (model.num_spins() > kDynamicsSpinCap)
        throw CapacityError("dynamics is limited to " + std::to_string(kDynamicsSpinCap) + " spins, got " +
                            std::to_string(model.num_spins()));
}

bool parse_double(std::string_view token, double& out) {
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
        token.remove_suffix(1);
    if (token.empty()) return false;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

/// H(t) = A(t) driver + B(t) diag(problem), driver = -1/2 sum sigma^x applied by bit flips.
struct Operators {
    int num_spins = 0;
    Eigen::VectorXd problem_diag;
    double problem_max = 0.0;
};

Operators make_operators(const IsingModel& model) {
    const int n = model.num_spins();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Operators ops;
    ops.num_spins = n;
    ops.problem_diag.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        ops.problem_diag[k] = 0.5 * energy(model, basis_spins(n, static_cast<std::uint64_t>(k)));
    ops.problem_max = ops.problem_diag.cwiseAbs().maxCoeff();
    return ops;
}

void apply_driver(int n, const QuantumState& v, QuantumState& out) {
    out.setZero(v.size());
    for (int i = 0; i < n; ++i) {
        const Eigen::Index bit = Eigen::Index{1} << (n - 1 - i);
        for (Eigen::Index k = 0; k < v.size(); ++k) out[k] -= 0.5 * v[k ^ bit];
    }
}

/// Magnus-4 step: Omega = -i (ha driver + hb diag) + hc [driver, diag], and
/// psi <- exp(Omega) psi by a scaled Taylor series run to rounding level.
class Stepper {
  public:
    Stepper(const Operators& ops, const AnnealSchedule& schedule) : ops_(ops), schedule_(schedule) {}

    void step(double t, double dt, QuantumState& psi) {
        const double c = std::sqrt(3.0) / 6.0;
        const double s1 = schedule_.s(t + dt * (0.5 - c));
        const double s2 = schedule_.s(t + dt * (0.5 + c));
        const double a1 = schedule_.envelope.A(s1), b1 = schedule_.envelope.B(s1);
        const double a2 = schedule_.envelope.A(s2), b2 = schedule_.envelope.B(s2);
        ha_ = 0.5 * dt * (a1 + a2);
        hb_ = 0.5 * dt * (b1 + b2);
        // [A2, A1] = -[H2, H1] = -(a2 b1 - a1 b2) [driver, diag].
        hc_ = -std::sqrt(3.0) * dt * dt / 12.0 * (a2 * b1 - a1 * b2);

        const double n = ops_.num_spins;
        const double bound = std::abs(ha_) * 0.5 * n + std::abs(hb_) * ops_.problem_max +
                             std::abs(hc_) * n * ops_.problem_max;
        const int substeps = std::max(1, static_cast<int>(std::ceil(bound)));
        for (int m = 0; m < substeps; ++m) {
            term_ = psi;
            for (int k = 1; k <= 64; ++k) {
                apply_omega(term_, next_);
                term_ = next_ / (static_cast<double>(substeps) * k);
                psi += term_;
                if (term_.squaredNorm() <= 1e-34 * psi.squaredNorm()) break;
            }
        }
    }

  private:
    void apply_omega(const QuantumState& v, QuantumState& out) {
        const auto& p = ops_.problem_diag;
        apply_driver(ops_.num_spins, v, dv_);
        out = std::complex<double>(0.0, -1.0) * (ha_ * dv_ + hb_ * p.cwiseProduct(v));
        if (hc_ != 0.0) {
            pv_ = p.cwiseProduct(v);
            apply_driver(ops_.num_spins, pv_, dpv_);
            out += hc_ * (dpv_ - p.cwiseProduct(dv_));
        }
    }

    const Operators& ops_;
    const AnnealSchedule& schedule_;
    double ha_ = 0.0, hb_ = 0.0, hc_ = 0.0;
    QuantumState term_, next_, dv_, pv_, dpv_;
};

QuantumState run(const Operators& ops, const AnnealSchedule& schedule, double t0, double t1, int steps,
                 QuantumState psi) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (psi.size() != ops.problem_diag.size()) throw DimensionError("state dimension does not match the model");
    Stepper stepper(ops, schedule);
    const double dt = (t1 - t0) / steps;
    for (int k = 0; k < steps; ++k) stepper.step(t0 + k * dt, dt, psi);
    return psi;
}

QuantumState initial_state(const IsingModel& model, const AnnealSchedule& schedule,
                           const std::optional<SpinConfig>& initial) {
    if (initial) {
        check_length(model, *initial);
        return basis_state(*initial);
    }
    if (schedule.kind != ScheduleKind::Forward)
        throw std::invalid_argument("reverse schedules need a classical initial configuration");
    return plus_state(model.num_spins());
}

}  // namespace

double Envelope::A(double x) const { return s.empty() ? 1.0 - x : interpolate(s, a, x); }
double Envelope::B(double x) const { return s.empty() ? x : interpolate(s, b, x); }

Envelope parse_envelope_csv(std::string_view text) {
    Envelope env;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;
        double v[3];
        std::size_t start = 0;
        bool ok = true;
        for (int c = 0; c < 3; ++c) {
            const auto comma = line.find(',', start);
            if ((c < 2) != (comma != std::string_view::npos)) {
                ok = false;
                break;
            }
            const auto token = line.substr(start, c < 2 ? comma - start : std::string_view::npos);
            if (!parse_double(token, v[c])) {
                ok = false;
                break;
            }
            start = comma + 1;
        }
        if (!ok) {
            if (env.s.empty() && line_no == 1) continue;
            throw ParseError(line_no, "expected three numeric columns s,A,B");
        }
        if (!env.s.empty() && !(v[0] > env.s.back())) throw ParseError(line_no, "s must be strictly increasing");
        env.s.push_back(v[0]);
        env.a.push_back(v[1]);
        env.b.push_back(v[2]);
    }
    if (env.s.size() < 2) throw ParseError(line_no, "envelope needs at least two rows");
    return env;
}

double AnnealSchedule::s(double t) const {
    t = std::clamp(t, 0.0, tau);
    switch (kind) {
        case ScheduleKind::Forward: return t / tau;
        case ScheduleKind::Reverse:
            if (t <= 0.5 * tau) return 1.0 - 2.0 * (1.0 - s_a) * t / tau;
            return -1.0 + 2.0 * s_a + 2.0 * (1.0 - s_a) * t / tau;
        case ScheduleKind::ReversePause:
            if (t <= tau / 3.0) return 1.0 - 3.0 * (1.0 - s_a) * t / tau;
            if (t <= 2.0 * tau / 3.0) return s_a;
            return -2.0 + 3.0 * s_a + 3.0 * (1.0 - s_a) * t / tau;
    }
    return 0.0;
}

void validate(const AnnealSchedule& schedule) {
    if (!(schedule.tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (!(schedule.s_a >= 0.0 && schedule.s_a <= 1.0)) throw std::invalid_argument("s_a must lie in [0, 1]");
    const auto& e = schedule.envelope;
    if (e.s.size() != e.a.size() || e.s.size() != e.b.size())
        throw DimensionError("envelope columns differ in length");
    if (!e.s.empty() && e.s.size() < 2) throw std::invalid_argument("envelope needs at least two rows");
}

SpinConfig basis_spins(int num_spins, std::uint64_t k) {
    SpinConfig s(num_spins);
    for (int i = 0; i < num_spins; ++i) s[i] = ((k >> (num_spins - 1 - i)) & 1U) ? -1 : 1;
    return s;
}

std::uint64_t basis_index(const SpinConfig& s) {
    std::uint64_t k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) k = (k << 1) | (s[i] < 0 ? 1U : 0U);
    return k;
}

Eigen::MatrixXd build_hamiltonian(const IsingModel& model, const Envelope& envelope, double s) {
    check_cap(model);
    const Operators ops = make_operators(model);
    const int n = ops.num_spins;
    const Eigen::Index dim = ops.problem_diag.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        for (int i = 0; i < n; ++i) h(k ^ (Eigen::Index{1} << (n - 1 - i)), k) = -0.5 * envelope.A(s);
    h.diagonal() = envelope.B(s) * ops.problem_diag;
    return h;
}

QuantumState plus_state(int num_spins) {
    const Eigen::Index dim = Eigen::Index{1} << num_spins;
    return QuantumState::Constant(dim, std::complex<double>(std::pow(2.0, -0.5 * num_spins), 0.0));
}

QuantumState basis_state(const SpinConfig& s) {
    QuantumState psi = QuantumState::Zero(Eigen::Index{1} << s.size());
    psi[static_cast<Eigen::Index>(basis_index(s))] = 1.0;
    return psi;
}

QuantumState propagate(const IsingModel& model, const AnnealSchedule& schedule, double t0, double t1, int steps,
                       const QuantumState& psi) {
    check_cap(model);
    validate(schedule);
    return run(make_operators(model), schedule, t0, t1, steps, psi);
}

QuantumState evolve(const IsingModel& model, const AnnealSchedule& schedule, int steps,
                    const std::optional<SpinConfig>& initial) {
    check_cap(model);
    validate(schedule);
    return run(make_operators(model), schedule, 0.0, schedule.tau, steps, initial_state(model, schedule, initial));
}

Distribution measure(const QuantumState& psi) { return psi.cwiseAbs2(); }

double ground_state_probability(const Distribution& dist, std::span<const SpinConfig> ground_states) {
    double p = 0.0;
    for (const auto& g : ground_states) {
        const auto k = basis_index(g);
        if (g.size() > 62 || k >= static_cast<std::uint64_t>(dist.size()))
            throw DimensionError("ground state does not fit the distribution");
        p += dist[static_cast<Eigen::Index>(k)];
    }
    return p;
}

Distribution ice_ensemble(const IsingModel& model, double sigma, int draws, const AnnealSchedule& schedule, int steps,
                          std::uint64_t seed, const std::optional<SpinConfig>& initial, int workers) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    if (draws < 1) throw std::invalid_argument("draws must be >= 1");
    check_cap(model);
    validate(schedule);
    const QuantumState psi0 = initial_state(model, schedule, initial);
    if (sigma == 0.0) return measure(run(make_operators(model), schedule, 0.0, schedule.tau, steps, psi0));

    // Fixed chunking keeps the summation order independent of the worker count.
    constexpr int kChunk = 32;
    const int chunks = (draws + kChunk - 1) / kChunk;
    std::vector<Distribution> partial(chunks);
    parallel_for(chunks, workers, [&](int c) {
        Distribution acc = Distribution::Zero(psi0.size());
        for (int m = c * kChunk; m < std::min(draws, (c + 1) * kChunk); ++m) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
            std::vector<Coupling> couplings(model.couplings().begin(), model.couplings().end());
            for (auto& cp : couplings) cp.value += rng.normal(0.0, sigma);
            const IsingModel noisy(model.num_spins(), std::move(couplings), model.fields());
            acc += measure(run(make_operators(noisy), schedule, 0.0, schedule.tau, steps, psi0));
        }
        partial[c] = std::move(acc);
    });
    Distribution total = Distribution::Zero(psi0.size());
    for (const auto& p : partial) total += p;
    return total / total.sum();
}

void check_distribution(const Distribution& p) {
    if ((p.array() < 0.0).any()) throw std::invalid_argument("distribution has negative entries");
    if (std::abs(p.sum() - 1.0) > 1e-6) throw std::invalid_argument("distribution is not normalized");
}

double tvd(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw DimensionError("distributions differ in support size");
    check_distribution(p);
    check_distribution(q);
    return 0.5 * (p - q).cwiseAbs().sum();
}

double classical_fidelity(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw DimensionError("distributions differ in support size");
    check_distribution(p);
    check_distribution(q);
    if (p == q) return 1.0;
    const double overlap = (p.array() * q.array()).sqrt().sum();
    return std::min(1.0, overlap * overlap);
}

}  // namespace spinbench
