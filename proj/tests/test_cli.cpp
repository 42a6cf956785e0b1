// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "spinbench/exact.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/rng.hpp"

using namespace spinbench;
using namespace spinbench::cli;

namespace {

class TempDir {
  public:
    explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("spinbench_" + name)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& f) const { return path_ / f; }

  private:
    fs::path path_;
};

int run(const std::string& args) {
    const std::string cmd = std::string(SPINBENCH_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

SampleFile fixture_samples(const std::string& instance, const std::string& hash, const std::string& solver,
                           double best, double t_run) {
    SampleFile f;
    f.instance = instance;
    f.instance_hash = hash;
    f.solver = solver;
    f.params = Json{{"replicas", 1}};
    f.t_run_seconds = t_run;
    f.spins.push_back(SpinConfig::Ones(3));
    f.energies.push_back(best);
    return f;
}

void write_samples(const fs::path& p, const SampleFile& f) { write_json_atomic(p, to_json(f)); }

std::vector<SpinConfig> gibbs_draws(const IsingModel& m, double beta, int count, std::uint64_t seed) {
    const auto g = gibbs_table(m, beta);
    Rng rng(seed);
    std::vector<SpinConfig> out;
    for (int d = 0; d < count; ++d) {
        double u = rng.uniform(), acc = 0.0;
        Eigen::Index k = 0;
        while (k + 1 < g.probabilities.size() && (acc += g.probabilities[k]) <= u) ++k;
        out.push_back(config_from_index(m.num_spins(), static_cast<std::uint64_t>(k)));
    }
    return out;
}

SampleFile from_spins(const IsingModel& m, const std::string& hash, const std::vector<SpinConfig>& spins) {
    SampleFile f;
    f.instance = "m.txt";
    f.instance_hash = hash;
    f.solver = "fixture";
    for (const auto& s : spins) {
        f.spins.push_back(s);
        f.energies.push_back(energy(m, s));
    }
    return f;
}

}  // namespace

TEST(Bench, ThreeSolverFixtureMedians) {
    TempDir dir("bench_fixture");
    Json manifest{{"instances", Json::array()}};
    std::vector<std::string> hashes;
    for (int i = 0; i < 3; ++i) {
        const IsingModel m(3, {{0, 1, 1.0 + i}, {1, 2, -1.0}});
        const auto text = write_coo(m);
        const std::string file = "i" + std::to_string(i) + ".txt";
        write_text_atomic(dir / file, text);
        hashes.push_back(content_hash(text));
        manifest["instances"].push_back(Json{{"file", file}, {"hash", hashes.back()}});
    }
    const double a[3] = {-10, -8, -6}, b[3] = {-9, -8, -5}, c[3] = {-10, -7.6, -6};
    const double ta[3] = {1, 2, 3}, tb[3] = {5, 1, 4}, tc[3] = {0.5, 0.5, 9};
    std::vector<SampleFile> files;
    for (int i = 0; i < 3; ++i) {
        const std::string file = "i" + std::to_string(i) + ".txt";
        files.push_back(fixture_samples(file, hashes[i], "A", a[i], ta[i]));
        files.push_back(fixture_samples(file, hashes[i], "B", b[i], tb[i]));
        files.push_back(fixture_samples(file, hashes[i], "C", c[i], tc[i]));
    }
    const auto r = bench(manifest, dir.path(), files, BenchOptions{});
    EXPECT_EQ(r.pooled_best.at(hashes[0]), -10.0);
    EXPECT_EQ(r.pooled_best.at(hashes[1]), -8.0);
    EXPECT_EQ(r.pooled_best.at(hashes[2]), -6.0);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_EQ(r.rows[0].solver, "A");
    EXPECT_EQ(r.rows[0].instances, 3);
    EXPECT_EQ(r.rows[0].t_run_median, 2.0);
    EXPECT_EQ(r.rows[0].e_approx_median, 0.0);
    EXPECT_EQ(r.rows[0].d_approx_median, 1.0);
    EXPECT_EQ(r.rows[1].solver, "B");
    EXPECT_EQ(r.rows[1].t_run_median, 4.0);
    EXPECT_NEAR(r.rows[1].e_approx_median, 0.05, 1e-15);
    EXPECT_EQ(r.rows[1].d_approx_median, 0.0);
    EXPECT_EQ(r.rows[2].solver, "C");
    EXPECT_EQ(r.rows[2].t_run_median, 0.5);
    EXPECT_EQ(r.rows[2].e_approx_median, 0.0);
    EXPECT_EQ(r.rows[2].d_approx_median, 1.0);
    for (const auto& f : files) EXPECT_LE(r.pooled_best.at(f.instance_hash), f.best_energy());

    // One solver on one instance reports that solver's own run.
    const auto single = bench(manifest, dir.path(), {files[1]}, BenchOptions{});
    ASSERT_EQ(single.rows.size(), 1u);
    EXPECT_EQ(single.rows[0].t_run_median, 5.0);
    EXPECT_EQ(single.rows[0].e_approx_median, 0.0);

    auto stray = files[0];
    stray.instance_hash = "0000000000000000";
    EXPECT_THROW(bench(manifest, dir.path(), {stray}, BenchOptions{}), std::runtime_error);
    auto crossed = files[0];
    crossed.instance_hash = hashes[1];
    EXPECT_THROW(bench(manifest, dir.path(), {crossed}, BenchOptions{}), std::runtime_error);
}

TEST(Cli, GenWritesFilesAndManifest) {
    TempDir dir("cli_gen");
    ASSERT_EQ(run("gen --class rco --lattice 3x3x2 --count 20 --seed 7 --out " + (dir / "a").string()), 0);
    const auto manifest = read_json_file(dir / "a/rco_manifest.json");
    ASSERT_EQ(manifest["instances"].size(), 20u);
    for (const auto& inst : manifest["instances"]) {
        const auto path = dir / "a" / inst["file"].get<std::string>();
        EXPECT_EQ(content_hash(slurp(path)), inst["hash"].get<std::string>());
        const auto m = read_coo_file(path);
        EXPECT_EQ(m.num_spins(), 18);
        EXPECT_FALSE(m.has_fields());
    }
    ASSERT_EQ(run("gen --class rco --lattice 3x3x2 --count 20 --seed 7 --out " + (dir / "b").string()), 0);
    for (const auto& entry : fs::directory_iterator(dir / "a"))
        EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename()));

    ASSERT_EQ(run("gen --class rau --lattice 2x2x1 --count 0 --out " + (dir / "c").string()), 0);
    EXPECT_TRUE(read_json_file(dir / "c/rau_manifest.json")["instances"].empty());
    EXPECT_EQ(std::distance(fs::directory_iterator(dir / "c"), fs::directory_iterator{}), 1);

    EXPECT_EQ(run("gen --class xyz --lattice 2x2x1 --out " + (dir / "d").string()), 2);
    EXPECT_EQ(run("gen --class rco --lattice 2x2 --out " + (dir / "d").string()), 2);
}

TEST(Cli, SolveContracts) {
    TempDir dir("cli_solve");
    write_text_atomic(dir / "ex.txt", write_coo(oracle::three_spin_example()));
    ASSERT_EQ(run("solve " + (dir / "ex.txt").string() + " --solver bruteforce -o " + (dir / "bf.json").string()), 0);
    const auto bf = read_json_file(dir / "bf.json");
    EXPECT_EQ(bf["best_energy"].get<double>(), -3.25);
    EXPECT_EQ(bf["samples"].size(), 8u);
    EXPECT_EQ(bf["instance_hash"].get<std::string>(), content_hash(slurp(dir / "ex.txt")));

    EXPECT_EQ(run("solve " + (dir / "missing.txt").string() + " --solver sa"), 2);
    EXPECT_EQ(run("solve " + (dir / "ex.txt").string() + " --solver magic"), 2);
    EXPECT_EQ(run("solve " + (dir / "ex.txt").string() + " --solver sa --param bogus=1"), 2);
    write_text_atomic(dir / "bad.txt", "1 2 nope\n");
    EXPECT_EQ(run("solve " + (dir / "bad.txt").string() + " --solver sa"), 2);
    EXPECT_EQ(run("solve " + (dir / "ex.txt").string() + " --solver sa --param alpha=2"), 1);
    EXPECT_EQ(run("solve"), 2);

    for (const std::string solver : {"sa", "pa", "sbm", "descent"}) {
        ASSERT_EQ(run("solve " + (dir / "ex.txt").string() + " --solver " + solver + " --seed 4 -o " +
                      (dir / (solver + ".json")).string()),
                  0);
        const auto s = read_sample_file(dir / (solver + ".json"));
        EXPECT_EQ(s.best_energy(), -3.25) << solver;
    }
}

TEST(Cli, PepsRunsEveryTransform) {
    TempDir dir("cli_peps");
    write_text_atomic(dir / "m.txt", write_coo(generate(InstanceClass::RCO, LatticeSpec{3, 3, 2, true}, 5)));
    ASSERT_EQ(run("solve " + (dir / "m.txt").string() +
                  " --solver peps --lattice 3x3x2 --chi 32 --beta 2 --max-states 256 --transforms all -o " +
                  (dir / "p.json").string()),
              0);
    const auto doc = read_json_file(dir / "p.json");
    EXPECT_EQ(doc["per_transform"].size(), 8u);
    EXPECT_EQ(doc["samples"].size(), 256u);
    EXPECT_EQ(doc["best_energy"].get<double>(),
              brute_force(read_coo_file(dir / "m.txt"), 1).ground_energy());
    EXPECT_EQ(run("solve " + (dir / "m.txt").string() + " --solver peps"), 2);
}

TEST(Cli, SimulateContracts) {
    TempDir dir("cli_sim");
    write_text_atomic(dir / "two.txt", "1 2 1.0\n1 1 0.5\n");
    const auto m = (dir / "two.txt").string();
    ASSERT_EQ(run("simulate " + m + " --tau 20 --steps 200 --draws 1 -o " + (dir / "one.json").string()), 0);
    ASSERT_EQ(run("simulate " + m + " --tau 20 --steps 200 --draws 100 -o " + (dir / "many.json").string()), 0);
    EXPECT_EQ(read_json_file(dir / "one.json")["distribution"], read_json_file(dir / "many.json")["distribution"]);

    ASSERT_EQ(run("simulate " + m + " --tau 1000 --steps 10000 -o " + (dir / "slow.json").string()), 0);
    EXPECT_GE(read_json_file(dir / "slow.json")["ground_state_probability"].get<double>(), 0.99);

    ASSERT_EQ(run("simulate " + m + " --tau 20 --steps 200 --reference " + (dir / "one.json").string() + " -o " +
                  (dir / "cmp.json").string()),
              0);
    const auto cmp = read_json_file(dir / "cmp.json");
    EXPECT_EQ(cmp["tvd"].get<double>(), 0.0);
    EXPECT_EQ(cmp["fidelity"].get<double>(), 1.0);

    EXPECT_EQ(run("simulate " + m + " --schedule sideways"), 2);
    EXPECT_EQ(run("simulate " + m + " --schedule reverse"), 1);
    EXPECT_EQ(run("simulate " + m + " --schedule pause --initial ground --tau 3 --steps 30"), 0);
}

TEST(Cli, ThermoRecords) {
    TempDir dir("cli_thermo");
    const auto m = generate(InstanceClass::RAU, LatticeSpec{2, 3, 2, true}, 12);
    const auto text = write_coo(m);
    write_text_atomic(dir / "m.txt", text);
    const auto hash = content_hash(text);
    const auto before = gibbs_draws(m, 0.2, 10000, 1);
    const auto after = gibbs_draws(m, 1.0, 10000, 2);
    write_samples(dir / "before.json", from_spins(m, hash, before));
    write_samples(dir / "after.json", from_spins(m, hash, after));
    const std::string base =
        "thermo " + (dir / "m.txt").string() + " --initial " + (dir / "before.json").string() + " --beta1 0.2 ";
    ASSERT_EQ(run(base + "--final " + (dir / "after.json").string() + " -o " + (dir / "t.json").string()), 0);
    const auto t = read_json_file(dir / "t.json");
    EXPECT_NEAR(t["beta2"].get<double>(), 1.0, 0.05);
    EXPECT_EQ(t["mode_source"], "bounds");

    // Swapping pairs gives changes of both signs with zero mean.
    std::vector<SpinConfig> a, b;
    for (int k = 0; k < 50; ++k) {
        a.push_back(after[2 * k]), b.push_back(after[2 * k + 1]);
        a.push_back(after[2 * k + 1]), b.push_back(after[2 * k]);
    }
    write_samples(dir / "a.json", from_spins(m, hash, a));
    write_samples(dir / "b.json", from_spins(m, hash, b));
    const std::string zero = "thermo " + (dir / "m.txt").string() + " --initial " + (dir / "a.json").string() +
                             " --final " + (dir / "b.json").string() + " --beta1 0.5 -o " + (dir / "z.json").string();
    ASSERT_EQ(run(zero), 0);
    const auto z = read_json_file(dir / "z.json");
    EXPECT_NEAR(z["de1_mean"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(z["sigma_lb"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(z["heat_lb"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(z["work_lb"].get<double>(), 0.0, 1e-12);

    // The fixture's mean change is negative, so E and A rows are reachable; R
    // and H rows need a positive mean, obtained by swapping the two files.
    const std::string fwd = "thermo " + (dir / "m.txt").string() + " --initial " + (dir / "before.json").string() +
                            " --final " + (dir / "after.json").string() + " --beta1 0.2 ";
    const std::string rev = "thermo " + (dir / "m.txt").string() + " --initial " + (dir / "after.json").string() +
                            " --final " + (dir / "before.json").string() + " --beta1 0.2 --beta-max 50 ";
    const double de1 = t["de1_mean"].get<double>();
    ASSERT_LT(de1, 0.0);
    auto mode = [&](const std::string& cmd, double de2) {
        const auto out = dir / "mode.json";
        EXPECT_EQ(run(cmd + "--de2 " + std::to_string(de2) + " -o " + out.string()), 0);
        return read_json_file(out)["mode"].get<std::string>();
    };
    EXPECT_EQ(mode(fwd, -0.5 * de1), "engine");
    EXPECT_EQ(mode(fwd, -2.0 * de1), "accelerator");
    EXPECT_EQ(mode(rev, 0.5 * de1), "refrigerator");
    EXPECT_EQ(mode(rev, -0.5 * de1), "heater");

    EXPECT_EQ(run("thermo " + (dir / "m.txt").string() + " --initial " + (dir / "nope.json").string() +
                  " --final " + (dir / "b.json").string() + " --beta1 1"),
              2);
}

TEST(Cli, MetricsAndBenchFromFiles) {
    TempDir dir("cli_metrics");
    ASSERT_EQ(run("gen --class rau --lattice 2x2x2 --count 2 --seed 3 --out " + dir.path().string()), 0);
    std::string files;
    for (int i = 0; i < 2; ++i)
        for (const std::string solver : {"sa", "bruteforce"}) {
            const auto out = dir / ("s" + std::to_string(i) + solver + ".json");
            ASSERT_EQ(run("solve " + (dir / ("rau_" + std::to_string(i) + ".txt")).string() + " --solver " + solver +
                          " --t-run 0.5 -o " + out.string()),
                      0);
            files += " " + out.string();
        }
    ASSERT_EQ(run("metrics " + (dir / "s0sa.json").string() + " -o " + (dir / "m.json").string()), 0);
    const auto m = read_json_file(dir / "m.json");
    EXPECT_EQ(m["e_approx"].get<double>(), 0.0);
    EXPECT_EQ(m["t_run_seconds"].get<double>(), 0.5);
    EXPECT_GE(m["diversity"]["size"].get<int>(), 1);

    ASSERT_EQ(run("bench --manifest " + (dir / "rau_manifest.json").string() + files + " --csv " +
                  (dir / "b.csv").string() + " --json " + (dir / "b.json").string()),
              0);
    const auto b = read_json_file(dir / "b.json");
    EXPECT_EQ(b["rows"].size(), 2u);
    std::istringstream csv(slurp(dir / "b.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "solver,params,instances,t_run_median,e_approx_median,d_approx_median");
    EXPECT_EQ(run("bench --manifest " + (dir / "missing.json").string() + files), 2);
}
