// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark instance families and the COO text format.
//
// COO rows are "i j v" with 1-based indices; i == j encodes the field h_i.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinbench/model.hpp"

namespace spinbench {

using Edge = std::pair<int, int>;

struct LatticeSpec {
    int rows = 1;
    int cols = 1;
    int cell_size = 1;
    bool diagonal_edges = true;

    int num_cells() const { return rows * cols; }
    int num_spins() const { return rows * cols * cell_size; }
};

/// Cell membership of every spin on a rows x cols grid of clusters.
/// Cell (r, c) has index r * cols + c.
struct ClusterLayout {
    int rows = 1;
    int cols = 1;
    std::vector<int> cell_of;
};

void validate(const LatticeSpec& spec);

/// Node id = (r * cols + c) * cell_size + k. Edges have i < j and are sorted.
std::vector<Edge> build_lattice(const LatticeSpec& spec);
ClusterLayout lattice_layout(const LatticeSpec& spec);

enum class InstanceClass { RAU, RCO, CBFM_P };

InstanceClass parse_instance_class(std::string_view name);
std::string to_string(InstanceClass c);

/// Couplings are drawn from stream 0 in lexicographic edge order, fields
/// from stream 1 in spin order.
IsingModel generate(InstanceClass cls, int num_spins, std::span<const Edge> edges, std::uint64_t seed);
IsingModel generate(InstanceClass cls, const LatticeSpec& spec, std::uint64_t seed);

/// Number of spins is the largest index that appears.
IsingModel parse_coo(std::string_view text);
/// Every field (zeros included, so N survives the round trip), then couplings.
std::string write_coo(const IsingModel& model);

IsingModel read_coo_file(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// FNV-1a 64, as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace spinbench
