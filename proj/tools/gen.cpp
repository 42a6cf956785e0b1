// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "cli.hpp"
#include "spinbench/instances.hpp"
#include "spinbench/rng.hpp"

namespace spinbench::cli {

namespace {

std::pair<int, std::vector<Edge>> read_graph(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path.string());
    std::istringstream in(read_text_file(path));
    std::vector<Edge> edges;
    int n = 0;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::istringstream fields(line);
        int i = 0, j = 0;
        std::string rest;
        if (!(fields >> i >> j) || (fields >> rest) || i < 1 || j < 1 || i == j)
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected two distinct 1-based indices");
        edges.emplace_back(std::min(i, j) - 1, std::max(i, j) - 1);
        n = std::max({n, i, j});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {n, edges};
}

}  // namespace

void run_gen(const GenOptions& o) {
    InstanceClass cls;
    try {
        cls = parse_instance_class(o.instance_class);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.count < 0) throw UsageError("--count must be >= 0");
    if (o.lattice.empty() == o.graph.empty()) throw UsageError("give exactly one of --lattice and --graph");
    const std::string name = o.name.empty() ? to_string(cls) : o.name;

    Json manifest{{"class", to_string(cls)}};
    std::optional<LatticeSpec> spec;
    std::pair<int, std::vector<Edge>> graph;
    if (!o.lattice.empty()) {
        spec = parse_lattice(o.lattice, !o.no_diagonal);
        manifest["lattice"] = Json{{"rows", spec->rows},
                                   {"cols", spec->cols},
                                   {"cell_size", spec->cell_size},
                                   {"diagonal", spec->diagonal_edges}};
    } else {
        graph = read_graph(o.graph);
        manifest["graph"] = o.graph.filename().string();
    }
    manifest["seed"] = o.seed;
    manifest["count"] = o.count;

    fs::create_directories(o.out_dir);
    Json list = Json::array();
    for (int idx = 0; idx < o.count; ++idx) {
        const std::uint64_t seed = derive_seed(o.seed, static_cast<std::uint64_t>(idx));
        const auto model = spec ? generate(cls, *spec, seed) : generate(cls, graph.first, graph.second, seed);
        const auto text = write_coo(model);
        const std::string file = name + "_" + std::to_string(idx) + ".txt";
        write_text_atomic(o.out_dir / file, text);
        list.push_back(Json{{"file", file},
                            {"index", idx},
                            {"seed", seed},
                            {"num_spins", model.num_spins()},
                            {"hash", content_hash(text)}});
    }
    manifest["instances"] = std::move(list);
    write_json_atomic(o.out_dir / (name + "_manifest.json"), manifest);
}

}  // namespace spinbench::cli
