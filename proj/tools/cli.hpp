// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subcommands of the spinbench tool. Each run_* function writes its
// artifacts and throws on failure; main() maps exceptions to exit codes.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinbench/instances.hpp"
#include "spinbench/model.hpp"
#include "spinbench/sample_set.hpp"

namespace spinbench::cli {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Missing files, unreadable or malformed inputs, bad flags: exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json_file(const fs::path& path);
/// Pretty-printed with a trailing newline, written via temp file + rename.
void write_json_atomic(const fs::path& path, const Json& doc);
/// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const fs::path& path, const Json& doc);
void emit_text(const fs::path& path, const std::string& text);

IsingModel load_instance(const fs::path& path);

/// "RxCxT", e.g. "3x3x2".
LatticeSpec parse_lattice(const std::string& text, bool diagonal = true);

/// A solver output file.
struct SampleFile {
    std::string instance;
    std::string instance_hash;
    std::string solver;
    Json params = Json::object();
    /// Keys of `params` computed from the instance; ignored when grouping runs.
    std::vector<std::string> derived_params;
    std::uint64_t seed = 0;
    double t_run_seconds = 0.0;
    std::vector<SpinConfig> spins;
    std::vector<double> energies;

    double best_energy() const;
};

Json to_json(const SampleFile& f);
SampleFile sample_file_from_json(const Json& doc);
SampleFile read_sample_file(const fs::path& path);

// gen ----------------------------------------------------------------------

struct GenOptions {
    std::string instance_class = "rco";
    std::string lattice;
    bool no_diagonal = false;
    /// Edge list with 1-based "i j" lines; replaces --lattice.
    fs::path graph;
    int count = 1;
    std::uint64_t seed = 0;
    fs::path out_dir = ".";
    std::string name;
};

void run_gen(const GenOptions& o);

// solve --------------------------------------------------------------------

struct SolveOptions {
    fs::path instance;
    std::string solver;
    std::uint64_t seed = 0;
    std::optional<int> replicas;
    std::vector<std::string> params;
    // peps
    std::string lattice;
    int chi = 32;
    double beta = 2.0;
    int max_states = 256;
    double cutoff = 0.0;
    std::string transforms = "0";
    // bruteforce
    int states = 100;
    int prefix_bits = 0;
    std::optional<double> t_run;
    fs::path out;
};

void run_solve(const SolveOptions& o);

// bench --------------------------------------------------------------------

struct BenchOptions {
    fs::path manifest;
    std::vector<fs::path> samples;
    double approximation_ratio = 0.01;
    double independence_fraction = 0.5;
    int restarts = 100;
    std::uint64_t seed = 0;
    fs::path out_csv;
    fs::path out_json;
};

struct BenchRow {
    std::string solver;
    std::string params;
    int instances = 0;
    double t_run_median = 0.0;
    double e_approx_median = 0.0;
    double d_approx_median = 0.0;
};

struct BenchResult {
    /// Lowest energy over all solvers, by instance hash.
    std::map<std::string, double> pooled_best;
    std::vector<BenchRow> rows;
};

BenchResult bench(const Json& manifest, const fs::path& manifest_dir, const std::vector<SampleFile>& files,
                  const BenchOptions& o);
void run_bench(const BenchOptions& o);

// metrics ------------------------------------------------------------------

struct MetricsOptions {
    fs::path samples;
    std::optional<double> e_ref;
    double approximation_ratio = 0.01;
    std::optional<double> absolute_threshold;
    double target_confidence = 0.99;
    double independence_fraction = 0.5;
    int restarts = 100;
    std::uint64_t seed = 0;
    fs::path out;
};

void run_metrics(const MetricsOptions& o);

// thermo -------------------------------------------------------------------

struct ThermoOptions {
    fs::path instance;
    fs::path initial;
    fs::path final_samples;
    double beta1 = 1.0;
    double beta_max = 50.0;
    /// Known <Delta E_2>; classifies by the full sign table instead of the bounds.
    std::optional<double> de2_mean;
    fs::path out;
};

void run_thermo(const ThermoOptions& o);

// simulate -----------------------------------------------------------------

struct SimulateOptions {
    fs::path instance;
    std::string schedule = "forward";
    double tau = 10.0;
    double s_a = 0.5;
    int steps = 1000;
    double sigma = 0.0;
    int draws = 1;
    std::uint64_t seed = 0;
    fs::path envelope;
    /// "ground" or a string of + and - characters.
    std::string initial;
    fs::path reference;
    fs::path out;
};

void run_simulate(const SimulateOptions& o);

}  // namespace spinbench::cli
