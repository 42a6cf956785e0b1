// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "spinbench/instances.hpp"

namespace spinbench::cli {

namespace {

std::string read_existing(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path.string());
    return read_text_file(path);
}

}  // namespace

Json read_json_file(const fs::path& path) {
    const auto text = read_existing(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

void write_json_atomic(const fs::path& path, const Json& doc) { write_text_atomic(path, doc.dump(2) + "\n"); }

void emit(const fs::path& path, const Json& doc) { emit_text(path, doc.dump(2) + "\n"); }

void emit_text(const fs::path& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text_atomic(path, text);
}

IsingModel load_instance(const fs::path& path) { return parse_coo(read_existing(path)); }

LatticeSpec parse_lattice(const std::string& text, bool diagonal) {
    LatticeSpec spec;
    spec.diagonal_edges = diagonal;
    char x1 = 0, x2 = 0;
    std::istringstream in(text);
    if (!(in >> spec.rows >> x1 >> spec.cols >> x2 >> spec.cell_size) || x1 != 'x' || x2 != 'x' || !in.eof())
        throw UsageError("lattice must look like RxCxT, got '" + text + "'");
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return spec;
}

double SampleFile::best_energy() const {
    if (energies.empty()) throw UsageError("sample file for " + instance + " holds no samples");
    return *std::min_element(energies.begin(), energies.end());
}

Json to_json(const SampleFile& f) {
    Json samples = Json::array();
    for (std::size_t k = 0; k < f.spins.size(); ++k) {
        Json spins = Json::array();
        for (Eigen::Index i = 0; i < f.spins[k].size(); ++i) spins.push_back(static_cast<int>(f.spins[k][i]));
        samples.push_back(Json{{"spins", std::move(spins)}, {"energy", f.energies[k]}});
    }
    return Json{{"instance", f.instance},
                {"instance_hash", f.instance_hash},
                {"solver", f.solver},
                {"params", f.params},
                {"derived_params", f.derived_params},
                {"seed", f.seed},
                {"t_run_seconds", f.t_run_seconds},
                {"samples", std::move(samples)},
                {"best_energy", f.spins.empty() ? Json(nullptr) : Json(f.best_energy())}};
}

SampleFile sample_file_from_json(const Json& doc) {
    SampleFile f;
    try {
        f.instance = doc.value("instance", "");
        f.instance_hash = doc.at("instance_hash").get<std::string>();
        f.solver = doc.at("solver").get<std::string>();
        f.params = doc.value("params", Json::object());
        f.derived_params = doc.value("derived_params", std::vector<std::string>{});
        f.seed = doc.at("seed").get<std::uint64_t>();
        f.t_run_seconds = doc.at("t_run_seconds").get<double>();
        for (const auto& s : doc.at("samples")) {
            const auto& spins = s.at("spins");
            SpinConfig c(static_cast<Eigen::Index>(spins.size()));
            for (std::size_t i = 0; i < spins.size(); ++i) {
                const int v = spins[i].get<int>();
                if (v != 1 && v != -1) throw UsageError("spins must be +1 or -1");
                c[static_cast<Eigen::Index>(i)] = static_cast<std::int8_t>(v);
            }
            f.spins.push_back(std::move(c));
            f.energies.push_back(s.at("energy").get<double>());
        }
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed sample file: ") + e.what());
    }
    return f;
}

SampleFile read_sample_file(const fs::path& path) { return sample_file_from_json(read_json_file(path)); }

}  // namespace spinbench::cli
