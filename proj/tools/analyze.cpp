// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cli.hpp"
#include "spinbench/dynamics.hpp"
#include "spinbench/exact.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/metrics.hpp"
#include "spinbench/thermo.hpp"

namespace spinbench::cli {

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string spin_string(const SpinConfig& s) {
    std::string out;
    for (Eigen::Index i = 0; i < s.size(); ++i) out += s[i] > 0 ? '+' : '-';
    return out;
}

SpinConfig parse_spin_string(const std::string& text, int n) {
    if (static_cast<int>(text.size()) != n) throw UsageError("--initial needs " + std::to_string(n) + " characters");
    SpinConfig s(n);
    for (int i = 0; i < n; ++i) {
        if (text[i] != '+' && text[i] != '-') throw UsageError("--initial takes '+' and '-' characters");
        s[i] = text[i] == '+' ? 1 : -1;
    }
    return s;
}

void check_same_instance(const SampleFile& f, const std::string& hash, const fs::path& path) {
    if (f.instance_hash != hash) throw std::runtime_error(path.string() + " was produced for a different instance");
}

}  // namespace

void run_metrics(const MetricsOptions& o) {
    const auto f = read_sample_file(o.samples);
    const double best = f.best_energy();
    const double e_ref = o.e_ref.value_or(best);
    const Threshold threshold = o.absolute_threshold ? Threshold{ThresholdKind::Absolute, *o.absolute_threshold}
                                                     : Threshold{ThresholdKind::Relative, o.approximation_ratio};
    std::size_t hits = 0;
    for (double e : f.energies) hits += is_success(e, e_ref, threshold) ? 1 : 0;
    const double p_s = static_cast<double>(hits) / static_cast<double>(f.energies.size());
    const double time = time_to_target(f.energies, e_ref, threshold, o.target_confidence, f.t_run_seconds);
    const auto d = diversity(f.spins, f.energies, e_ref, o.approximation_ratio, o.independence_fraction, o.restarts,
                             o.seed);
    emit(o.out, Json{{"instance_hash", f.instance_hash},
                     {"solver", f.solver},
                     {"e_ref", e_ref},
                     {"best_energy", best},
                     {"e_approx", e_approx(best, e_ref)},
                     {"threshold", {{"kind", o.absolute_threshold ? "absolute" : "relative"}, {"value", threshold.value}}},
                     {"success_probability", p_s},
                     {"target_confidence", o.target_confidence},
                     {"t_run_seconds", f.t_run_seconds},
                     {"tts_seconds", finite_or_null(time)},
                     {"diversity", {{"size", d.size}, {"witness", d.witness}}}});
}

void run_thermo(const ThermoOptions& o) {
    const auto model = load_instance(o.instance);
    const auto hash = content_hash(read_text_file(o.instance));
    const auto before = read_sample_file(o.initial);
    const auto after = read_sample_file(o.final_samples);
    check_same_instance(before, hash, o.initial);
    check_same_instance(after, hash, o.final_samples);
    if (before.spins.size() != after.spins.size())
        throw UsageError("initial and final sample files must hold the same number of runs");

    const auto beta2 = pseudo_likelihood_beta(model, after.spins, o.beta_max);
    const auto stats = energy_change_stats(model, before.spins, after.spins);
    const auto bounds = tur_bounds(stats, o.beta1, beta2.beta, model.num_spins());
    std::optional<OperatingMode> mode;
    if (o.de2_mean) mode = classify_mode(stats.mean, *o.de2_mean, stats.mean + *o.de2_mean);
    else mode = infer_mode(stats.mean, bounds);

    Json doc{{"instance_hash", hash},
             {"beta1", o.beta1},
             {"beta2", beta2.beta},
             {"beta2_boundary_hit", beta2.boundary_hit},
             {"pseudo_log_likelihood", beta2.log_likelihood},
             {"runs", stats.count},
             {"de1_mean", stats.mean},
             {"de1_second_moment", stats.second_moment},
             {"ratio", bounds.ratio},
             {"sigma_lb", finite_or_null(bounds.sigma_lb)},
             {"heat_lb", finite_or_null(bounds.heat_lb)},
             {"work_lb", finite_or_null(bounds.work_lb)},
             {"heat_lb_per_spin", finite_or_null(bounds.heat_lb_per_spin)},
             {"work_lb_per_spin", finite_or_null(bounds.work_lb_per_spin)},
             {"mode", mode ? to_string(*mode) : "indeterminate"},
             {"mode_source", o.de2_mean ? "de2" : "bounds"}};

    if (model.num_spins() <= kBruteForceCap) {
        const auto sp = brute_force(model, 1u << std::min(model.num_spins(), 10));
        const auto ground = sp.levels().front();
        const double p_gs = success_probability(after.spins, ground.configs);
        doc["ground_energy"] = ground.energy;
        doc["p_gs"] = p_gs;
        doc["q_gs"] = ground.energy != 0.0 ? Json(solution_quality(after.energies, ground.energy)) : Json(nullptr);
        if (bounds.work_lb > 0.0 && std::isfinite(bounds.work_lb) && bounds.heat_lb != 0.0 &&
            std::isfinite(bounds.heat_lb)) {
            const auto eff = efficiencies(p_gs, bounds.work_lb, bounds.heat_lb);
            doc["eta_comp_bound"] = eff.eta_comp;
            doc["eta_th_bound"] = eff.eta_th;
        } else {
            doc["eta_comp_bound"] = nullptr;
            doc["eta_th_bound"] = nullptr;
        }
    }
    emit(o.out, doc);
}

void run_simulate(const SimulateOptions& o) {
    const auto model = load_instance(o.instance);
    AnnealSchedule sch;
    if (o.schedule == "forward") sch.kind = ScheduleKind::Forward;
    else if (o.schedule == "reverse") sch.kind = ScheduleKind::Reverse;
    else if (o.schedule == "pause") sch.kind = ScheduleKind::ReversePause;
    else throw UsageError("--schedule must be forward, reverse or pause");
    sch.tau = o.tau;
    sch.s_a = o.s_a;
    if (!o.envelope.empty()) {
        if (!fs::is_regular_file(o.envelope)) throw UsageError("no such file: " + o.envelope.string());
        sch.envelope = parse_envelope_csv(read_text_file(o.envelope));
    }
    if (o.steps < 1) throw UsageError("--steps must be >= 1");
    if (model.num_spins() > kDynamicsSpinCap)
        throw CapacityError("simulate supports at most " + std::to_string(kDynamicsSpinCap) + " spins");

    const auto ground = brute_force(model, 1u << model.num_spins()).levels().front();
    std::optional<SpinConfig> initial;
    if (o.initial == "ground") initial = ground.configs.front();
    else if (!o.initial.empty()) initial = parse_spin_string(o.initial, model.num_spins());

    const auto dist = ice_ensemble(model, o.sigma, o.draws, sch, o.steps, o.seed, initial, default_workers());
    Json gs = Json::array();
    for (const auto& g : ground.configs) gs.push_back(spin_string(g));
    Json doc{{"instance_hash", content_hash(read_text_file(o.instance))},
             {"schedule", o.schedule},
             {"tau", o.tau},
             {"s_a", o.s_a},
             {"envelope", o.envelope.empty() ? Json("linear") : Json(o.envelope.filename().string())},
             {"steps", o.steps},
             {"sigma", o.sigma},
             {"draws", o.draws},
             {"seed", o.seed},
             {"initial", initial ? Json(spin_string(*initial)) : Json("plus")},
             {"ground_energy", ground.energy},
             {"ground_states", std::move(gs)},
             {"ground_state_probability", ground_state_probability(dist, ground.configs)},
             {"distribution", std::vector<double>(dist.data(), dist.data() + dist.size())}};
    if (!o.reference.empty()) {
        const auto ref = read_json_file(o.reference);
        Distribution q;
        try {
            const auto v = ref.at("distribution").get<std::vector<double>>();
            q = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        } catch (const Json::exception& e) {
            throw UsageError(o.reference.string() + ": no distribution array");
        }
        doc["reference"] = o.reference.filename().string();
        doc["tvd"] = tvd(dist, q);
        doc["fidelity"] = classical_fidelity(dist, q);
    }
    emit(o.out, doc);
}

}  // namespace spinbench::cli
