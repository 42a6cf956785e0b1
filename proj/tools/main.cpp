// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "spinbench/errors.hpp"

using namespace spinbench;
using namespace spinbench::cli;

int main(int argc, char** argv) {
    CLI::App app{"spinbench: spin-glass solvers, benchmarks and annealing analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "spinbench 0.1.0");

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "Generate random instances as COO files plus a manifest");
    g->add_option("--class", gen.instance_class, "rau, rco or cbfm-p")->capture_default_str();
    g->add_option("--lattice", gen.lattice, "RxCxT king's lattice, e.g. 3x3x2");
    g->add_flag("--no-diagonal", gen.no_diagonal, "Drop the diagonal edges of the lattice");
    g->add_option("--graph", gen.graph, "Edge list file with 1-based 'i j' lines");
    g->add_option("--count", gen.count)->capture_default_str();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--out", gen.out_dir, "Output directory")->capture_default_str();
    g->add_option("--name", gen.name, "File name prefix (defaults to the class)");

    SolveOptions solve;
    std::optional<int> replicas;
    std::optional<double> t_run;
    auto* s = app.add_subcommand("solve", "Run a solver on one instance and write its samples as JSON");
    s->add_option("instance", solve.instance, "COO instance file")->required();
    s->add_option("--solver", solve.solver, "bruteforce, sa, pa, sbm, peps or descent")->required();
    s->add_option("--seed", solve.seed)->capture_default_str();
    s->add_option("--replicas", replicas);
    s->add_option("--param", solve.params, "Solver parameter key=value (repeatable)");
    s->add_option("--lattice", solve.lattice, "peps: RxCxT cell layout of the instance");
    s->add_option("--chi", solve.chi, "peps: boundary bond dimension")->capture_default_str();
    s->add_option("--beta", solve.beta, "peps: inverse temperature")->capture_default_str();
    s->add_option("--max-states", solve.max_states, "peps: beam width")->capture_default_str();
    s->add_option("--cutoff", solve.cutoff, "peps: drop branches below this probability")->capture_default_str();
    s->add_option("--transforms", solve.transforms, "peps: 'all' or a list such as 0,3")->capture_default_str();
    s->add_option("--states", solve.states, "bruteforce: lowest states kept")->capture_default_str();
    s->add_option("--prefix-bits", solve.prefix_bits, "bruteforce: 2^b shards")->capture_default_str();
    s->add_option("--t-run", t_run, "Record this t_run_seconds instead of the measured time");
    s->add_option("-o,--out", solve.out, "Output file (stdout if omitted)");

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "Median e_approx and d_approx per solver setting over a manifest");
    b->add_option("--manifest", bench.manifest)->required();
    b->add_option("samples", bench.samples, "Sample files from solve")->required();
    b->add_option("--approx-ratio", bench.approximation_ratio)->capture_default_str();
    b->add_option("--independence", bench.independence_fraction, "R in the Hamming cut R*N")->capture_default_str();
    b->add_option("--restarts", bench.restarts)->capture_default_str();
    b->add_option("--seed", bench.seed)->capture_default_str();
    b->add_option("--csv", bench.out_csv, "Curve table (stdout if omitted)");
    b->add_option("--json", bench.out_json, "Also write the table and pooled E_best as JSON");

    MetricsOptions metrics;
    std::optional<double> e_ref, absolute;
    auto* m = app.add_subcommand("metrics", "Approximation, time-to-target and diversity of one sample file");
    m->add_option("samples", metrics.samples)->required();
    m->add_option("--e-ref", e_ref, "Reference energy (defaults to the file's best)");
    m->add_option("--approx-ratio", metrics.approximation_ratio)->capture_default_str();
    m->add_option("--absolute", absolute, "Absolute energy threshold instead of the ratio");
    m->add_option("--confidence", metrics.target_confidence)->capture_default_str();
    m->add_option("--independence", metrics.independence_fraction)->capture_default_str();
    m->add_option("--restarts", metrics.restarts)->capture_default_str();
    m->add_option("--seed", metrics.seed)->capture_default_str();
    m->add_option("-o,--out", metrics.out);

    ThermoOptions thermo;
    auto* t = app.add_subcommand("thermo", "Effective temperature, TUR bounds and operating mode");
    t->add_option("instance", thermo.instance)->required();
    t->add_option("--initial", thermo.initial, "Samples before each run")->required();
    t->add_option("--final", thermo.final_samples, "Samples after each run, same order")->required();
    t->add_option("--beta1", thermo.beta1, "Inverse temperature of the processor")->required();
    t->add_option("--beta-max", thermo.beta_max)->capture_default_str();
    std::optional<double> de2;
    t->add_option("--de2", de2, "Known mean environment energy change; classify by the full sign table");
    t->add_option("-o,--out", thermo.out);

    SimulateOptions sim;
    auto* d = app.add_subcommand("simulate", "Closed-system annealing of a small instance");
    d->add_option("instance", sim.instance)->required();
    d->add_option("--schedule", sim.schedule, "forward, reverse or pause")->capture_default_str();
    d->add_option("--tau", sim.tau)->capture_default_str();
    d->add_option("--s-a", sim.s_a, "Turning point of the reverse schedules")->capture_default_str();
    d->add_option("--steps", sim.steps)->capture_default_str();
    d->add_option("--sigma", sim.sigma, "Coupling noise")->capture_default_str();
    d->add_option("--draws", sim.draws, "Noise draws")->capture_default_str();
    d->add_option("--seed", sim.seed)->capture_default_str();
    d->add_option("--envelope", sim.envelope, "CSV with columns s,A,B");
    d->add_option("--initial", sim.initial, "'ground' or a string of + and -");
    d->add_option("--reference", sim.reference, "Earlier simulate output to compare against");
    d->add_option("-o,--out", sim.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*g) run_gen(gen);
        if (*s) {
            solve.replicas = replicas;
            solve.t_run = t_run;
            run_solve(solve);
        }
        if (*b) run_bench(bench);
        if (*m) {
            metrics.e_ref = e_ref;
            metrics.absolute_threshold = absolute;
            run_metrics(metrics);
        }
        if (*t) {
            thermo.de2_mean = de2;
            run_thermo(thermo);
        }
        if (*d) run_simulate(sim);
    } catch (const UsageError& e) {
        std::cerr << "spinbench: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "spinbench: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "spinbench: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "spinbench: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
