// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <sstream>

#include "cli.hpp"
#include "spinbench/annealers.hpp"
#include "spinbench/exact.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/peps.hpp"

namespace spinbench::cli {

namespace {

class ParamMap {
  public:
    explicit ParamMap(const std::vector<std::string>& items) {
        for (const auto& item : items) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + item + "'");
            values_[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }

    template <class T>
    void take(const std::string& key, T& out) {
        const auto it = values_.find(key);
        if (it == values_.end()) return;
        std::istringstream in(it->second);
        T v{};
        std::string rest;
        if (!(in >> v) || (in >> rest)) throw UsageError("bad value for parameter " + key + ": '" + it->second + "'");
        out = v;
        values_.erase(it);
    }

    template <class T>
    void take(const std::string& key, std::optional<T>& out) {
        if (!values_.count(key)) return;
        T v{};
        take(key, v);
        out = v;
    }

    std::optional<std::string> take_string(const std::string& key) {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        auto v = it->second;
        values_.erase(it);
        return v;
    }

    void expect_empty(const std::string& solver) const {
        if (!values_.empty()) throw UsageError("unknown parameter '" + values_.begin()->first + "' for solver " + solver);
    }

  private:
    std::map<std::string, std::string> values_;
};

std::vector<int> parse_transforms(const std::string& text) {
    if (text == "all") return {0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t used = 0;
            const int t = std::stoi(tok, &used);
            if (used != tok.size() || t < 0 || t > 7) throw std::invalid_argument(tok);
            out.push_back(t);
        } catch (const std::exception&) {
            throw UsageError("--transforms takes 'all' or a comma list of 0..7, got '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("--transforms is empty");
    return out;
}

template <class F>
auto timed(F&& f, double& seconds) {
    const auto start = std::chrono::steady_clock::now();
    auto out = f();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void fill(SampleFile& f, const SampleSet& set) {
    for (const auto& r : set.records) {
        f.spins.push_back(r.spins);
        f.energies.push_back(r.energy);
    }
}

}  // namespace

void run_solve(const SolveOptions& o) {
    const auto model = load_instance(o.instance);
    SampleFile f;
    f.instance = o.instance.filename().string();
    f.instance_hash = content_hash(read_text_file(o.instance));
    f.solver = o.solver;
    f.seed = o.seed;
    ParamMap params(o.params);
    const int workers = default_workers();
    double wall = 0.0;
    Json extra = Json::object();

    if (o.solver == "sa") {
        SaParams p;
        if (o.replicas) p.replicas = *o.replicas;
        params.take("t0", p.t0);
        params.take("steps", p.steps);
        params.take("sweeps", p.sweeps);
        params.take("alpha", p.alpha);
        params.take("t_final", p.t_final);
        if (const auto s = params.take_string("schedule")) {
            if (*s == "geometric") p.schedule = TemperatureSchedule::Geometric;
            else if (*s == "linear") p.schedule = TemperatureSchedule::Linear;
            else throw UsageError("schedule must be geometric or linear");
        }
        params.expect_empty(o.solver);
        validate(p);
        const auto set = simulated_annealing(model, p, o.seed, workers);
        fill(f, set);
        f.t_run_seconds = set.run_time;
        f.params = {{"t0", p.t0},         {"steps", p.steps},
                    {"sweeps", p.sweeps}, {"schedule", p.schedule == TemperatureSchedule::Geometric ? "geometric" : "linear"},
                    {"alpha", p.alpha},   {"t_final", p.t_final},
                    {"replicas", p.replicas}};
    } else if (o.solver == "pa") {
        PaParams p;
        if (o.replicas) p.replicas = *o.replicas;
        params.take("alpha", p.alpha);
        params.take("momentum", p.momentum);
        params.take("steps", p.steps);
        params.take("lambda0", p.lambda0);
        params.take("lambda_power", p.lambda_power);
        params.expect_empty(o.solver);
        if (!p.lambda0) {
            p.lambda0 = default_lambda0(model);
            f.derived_params.push_back("lambda0");
        }
        if (!p.momentum) p.momentum = 1.0 - p.alpha;
        validate(p);
        const auto set = parallel_annealing(model, p, o.seed, workers);
        fill(f, set);
        f.t_run_seconds = set.run_time;
        f.params = {{"alpha", p.alpha},     {"momentum", *p.momentum},         {"steps", p.steps},
                    {"lambda0", *p.lambda0}, {"lambda_power", p.lambda_power}, {"replicas", p.replicas}};
    } else if (o.solver == "sbm") {
        SbParams p;
        if (o.replicas) p.replicas = *o.replicas;
        params.take("a0", p.a0);
        params.take("c0", p.c0);
        params.take("dt", p.dt);
        params.take("steps", p.steps);
        params.take("ramp_power", p.ramp_power);
        params.expect_empty(o.solver);
        if (!p.c0) {
            p.c0 = default_c0(model, p.a0);
            f.derived_params.push_back("c0");
        }
        validate(p);
        const auto set = simulated_bifurcation(model, p, o.seed, workers);
        fill(f, set);
        f.t_run_seconds = set.run_time;
        f.params = {{"a0", p.a0},       {"c0", *p.c0},   {"dt", p.dt}, {"steps", p.steps},
                    {"ramp_power", p.ramp_power}, {"replicas", p.replicas}};
    } else if (o.solver == "descent") {
        int replicas = o.replicas.value_or(16);
        params.expect_empty(o.solver);
        if (replicas < 1) throw UsageError("--replicas must be >= 1");
        const auto set = descent_from_random(model, replicas, o.seed, workers);
        fill(f, set);
        f.t_run_seconds = set.run_time;
        f.params = {{"replicas", replicas}};
    } else if (o.solver == "bruteforce") {
        params.expect_empty(o.solver);
        if (o.states < 1) throw UsageError("--states must be >= 1");
        BruteForceOptions bf;
        bf.prefix_bits = o.prefix_bits;
        bf.workers = workers;
        const auto sp = timed([&] { return brute_force(model, static_cast<std::size_t>(o.states), bf); }, wall);
        for (const auto& s : sp.states) {
            f.spins.push_back(s.config);
            f.energies.push_back(s.energy);
        }
        f.t_run_seconds = wall;
        f.params = {{"states", o.states}, {"prefix_bits", o.prefix_bits}};
    } else if (o.solver == "peps") {
        params.expect_empty(o.solver);
        if (o.lattice.empty()) throw UsageError("peps needs --lattice RxCxT to group spins into cells");
        const auto spec = parse_lattice(o.lattice);
        if (spec.num_spins() != model.num_spins())
            throw UsageError("lattice " + o.lattice + " has " + std::to_string(spec.num_spins()) +
                             " spins but the instance has " + std::to_string(model.num_spins()));
        SearchParams sp;
        sp.beta = o.beta;
        sp.contraction.chi = o.chi;
        sp.max_states = o.max_states;
        sp.cutoff = o.cutoff;
        const auto transforms = parse_transforms(o.transforms);
        const auto sol = timed(
            [&] { return solve_with_transforms(model, lattice_layout(spec), sp, transforms, workers); }, wall);
        for (const auto& e : sol.best.entries) {
            f.spins.push_back(e.spins);
            f.energies.push_back(e.energy);
        }
        f.t_run_seconds = wall;
        f.params = {{"lattice", o.lattice}, {"chi", o.chi},       {"beta", o.beta},
                    {"max_states", o.max_states}, {"cutoff", o.cutoff}, {"transforms", transforms}};
        Json per = Json::array();
        for (const auto& [t, e] : sol.per_transform) per.push_back(Json{{"transform", t}, {"best_energy", e}});
        extra["per_transform"] = std::move(per);
        extra["discarded_weight"] = sol.best.discarded_weight;
        extra["largest_discarded_probability"] = sol.best.largest_discarded_probability;
    } else {
        throw UsageError("unknown solver '" + o.solver + "' (expected bruteforce, sa, pa, sbm, peps or descent)");
    }

    SampleSet check;
    for (std::size_t k = 0; k < f.spins.size(); ++k) check.records.push_back({f.spins[k], f.energies[k], 0});
    verify_energies(model, check);
    if (o.t_run) f.t_run_seconds = *o.t_run;

    Json doc = to_json(f);
    for (auto& [k, v] : extra.items()) doc[k] = v;
    emit(o.out, doc);
}

}  // namespace spinbench::cli
