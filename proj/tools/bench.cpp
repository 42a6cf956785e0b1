// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <sstream>

#include "cli.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/metrics.hpp"
#include "spinbench/rng.hpp"

namespace spinbench::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string num(double x) { return Json(x).dump(); }

int diversity_of(const std::vector<SpinConfig>& spins, const std::vector<double>& energies, double e_best,
                 const BenchOptions& o, std::uint64_t seed) {
    return diversity(spins, energies, e_best, o.approximation_ratio, o.independence_fraction, o.restarts, seed).size;
}

}  // namespace

BenchResult bench(const Json& manifest, const fs::path& manifest_dir, const std::vector<SampleFile>& files,
                  const BenchOptions& o) {
    std::map<std::string, std::string> hash_of_file;
    try {
        for (const auto& inst : manifest.at("instances")) {
            const auto file = inst.at("file").get<std::string>();
            const auto hash = inst.at("hash").get<std::string>();
            const auto path = manifest_dir / file;
            if (!fs::is_regular_file(path)) throw UsageError("manifest lists a missing instance: " + path.string());
            if (content_hash(read_text_file(path)) != hash)
                throw std::runtime_error("instance " + file + " does not match its manifest hash");
            hash_of_file[file] = hash;
        }
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed manifest: ") + e.what());
    }
    std::set<std::string> known;
    for (const auto& [file, hash] : hash_of_file) known.insert(hash);

    BenchResult result;
    std::map<std::string, std::pair<std::vector<SpinConfig>, std::vector<double>>> pooled;
    for (const auto& f : files) {
        if (!known.count(f.instance_hash))
            throw std::runtime_error("samples for " + f.instance + " refer to an instance hash not in the manifest");
        const auto named = hash_of_file.find(f.instance);
        if (named != hash_of_file.end() && named->second != f.instance_hash)
            throw std::runtime_error("samples for " + f.instance + " carry a different instance hash than the manifest");
        const double best = f.best_energy();
        auto [it, fresh] = result.pooled_best.emplace(f.instance_hash, best);
        if (!fresh) it->second = std::min(it->second, best);
        auto& pool = pooled[f.instance_hash];
        pool.first.insert(pool.first.end(), f.spins.begin(), f.spins.end());
        pool.second.insert(pool.second.end(), f.energies.begin(), f.energies.end());
    }

    std::map<std::string, int> d_total;
    std::uint64_t stream = 0;
    for (const auto& [hash, pool] : pooled)
        d_total[hash] = diversity_of(pool.first, pool.second, result.pooled_best[hash], o, derive_seed(o.seed, stream++));

    struct Group {
        std::set<std::string> instances;
        std::vector<double> t, e, d;
    };
    std::map<std::pair<std::string, std::string>, Group> groups;
    for (const auto& f : files) {
        Json setting = f.params;
        for (const auto& key : f.derived_params) setting.erase(key);
        auto& g = groups[{f.solver, setting.dump()}];
        const double e_best = result.pooled_best[f.instance_hash];
        g.instances.insert(f.instance_hash);
        g.t.push_back(f.t_run_seconds);
        g.e.push_back(e_approx(f.best_energy(), e_best));
        g.d.push_back(d_approx(diversity_of(f.spins, f.energies, e_best, o, derive_seed(o.seed, stream++)),
                               d_total[f.instance_hash]));
    }
    for (const auto& [key, g] : groups)
        result.rows.push_back(BenchRow{key.first, key.second, static_cast<int>(g.instances.size()), median(g.t),
                                       median(g.e), median(g.d)});
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return a.solver != b.solver ? a.solver < b.solver : a.t_run_median < b.t_run_median;
    });
    return result;
}

void run_bench(const BenchOptions& o) {
    const Json manifest = read_json_file(o.manifest);
    std::vector<SampleFile> files;
    for (const auto& p : o.samples) files.push_back(read_sample_file(p));
    if (files.empty()) throw UsageError("bench needs at least one sample file");
    const auto r = bench(manifest, o.manifest.parent_path(), files, o);

    std::ostringstream csv;
    csv << "solver,params,instances,t_run_median,e_approx_median,d_approx_median\n";
    for (const auto& row : r.rows)
        csv << csv_field(row.solver) << ',' << csv_field(row.params) << ',' << row.instances << ','
            << num(row.t_run_median) << ',' << num(row.e_approx_median) << ',' << num(row.d_approx_median) << '\n';
    emit_text(o.out_csv, csv.str());

    if (!o.out_json.empty()) {
        Json rows = Json::array();
        for (const auto& row : r.rows)
            rows.push_back(Json{{"solver", row.solver},
                                {"params", Json::parse(row.params)},
                                {"instances", row.instances},
                                {"t_run_median", row.t_run_median},
                                {"e_approx_median", row.e_approx_median},
                                {"d_approx_median", row.d_approx_median}});
        Json pooled = Json::object();
        for (const auto& [hash, e] : r.pooled_best) pooled[hash] = e;
        emit(o.out_json, Json{{"approximation_ratio", o.approximation_ratio},
                              {"independence_fraction", o.independence_fraction},
                              {"restarts", o.restarts},
                              {"pooled_best", std::move(pooled)},
                              {"rows", std::move(rows)}});
    }
}

}  // namespace spinbench::cli
