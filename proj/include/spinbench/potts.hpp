// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Clustering of an Ising instance into a Potts model on a king's-graph grid.
//
// A cell with k spins has d = 2^k states. Spin b of the cell (cell members in
// ascending spin order) is bit k-1-b of the state, 1 meaning +1, so state 0
// is all -1 and states are in lexicographic order.
//
// Pair energies are stored compressed: E(x_m, x_n) = Ebar(P_mn(x_m), P_nm(x_n))
// where P_mn keeps only the spins of m that couple to n.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "spinbench/instances.hpp"
#include "spinbench/model.hpp"

namespace spinbench {

inline constexpr int kClusterSizeCap = 8;

inline int cell_spin(int state, int k, int b) { return ((state >> (k - 1 - b)) & 1) ? 1 : -1; }

struct Projector {
    int source_dim = 1;
    int reduced_dim = 1;
    std::vector<int> map;
};

/// Coupling between spin `pos_m` of cell m and spin `pos_n` of cell n
/// (positions within the cells).
struct CrossCoupling {
    int pos_m = 0;
    int pos_n = 0;
    double value = 0.0;
};

struct ProjectedPair {
    Projector pm;
    Projector pn;
    /// reduced_dim(pm) x reduced_dim(pn).
    Eigen::MatrixXd energy;
};

/// Boundary sub-configurations are enumerated in the same bit order as cell
/// states, restricted to the boundary spins.
ProjectedPair build_projectors(int k_m, int k_n, std::span<const CrossCoupling> couplings);

struct PottsEdge {
    /// Cell indices, m < n.
    int m = 0;
    int n = 0;
    Projector pm;
    Projector pn;
    Eigen::MatrixXd energy;

    double pair_energy(int xm, int xn) const { return energy(pm.map[xm], pn.map[xn]); }
};

struct PottsHamiltonian {
    int rows = 1;
    int cols = 1;
    int num_spins = 0;
    /// Original spin ids of every cell, ascending.
    std::vector<std::vector<int>> members;
    std::vector<Eigen::VectorXd> local;
    /// One edge per king-adjacent cell pair, sorted by (m, n).
    std::vector<PottsEdge> edges;

    int num_cells() const { return rows * cols; }
    int cell(int r, int c) const { return r * cols + c; }
    int dim(int cell) const { return static_cast<int>(local[cell].size()); }
    /// nullptr when the cells are not adjacent.
    const PottsEdge* edge(int a, int b) const;

    SpinConfig decode(std::span<const int> states) const;
    std::vector<int> encode(const SpinConfig& s) const;
    double energy(std::span<const int> states) const;
};

/// Throws StructureError for unassigned spins, oversized cells or couplings
/// between cells that are not king neighbours.
PottsHamiltonian cluster_to_potts(const IsingModel& model, const ClusterLayout& layout, int cap = kClusterSizeCap);

/// The 8 symmetries of the square: 0 identity, 1-3 rotations by 90, 180 and
/// 270 degrees, 4 column mirror, 5 row mirror, 6 transpose, 7 anti-transpose.
inline constexpr int kNumTransforms = 8;

/// New (row, col) of cell (r, c) on a rows x cols grid.
std::array<int, 2> transform_coords(int transform, int rows, int cols, int r, int c);

/// Relabels the grid; cell members keep their original spin ids.
PottsHamiltonian transform(const PottsHamiltonian& potts, int transform);

}  // namespace spinbench
