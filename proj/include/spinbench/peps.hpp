// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// PEPS of the Gibbs weights of a Potts model on a king's-graph grid,
// boundary-MPS contraction, and branch-and-bound in probability space.
//
// Site (r, c) carries four legs (L, U, R, D) and a physical index x:
//   D  = combined projection of x onto its three edges to the row below
//        (vertical, diagonal, anti-diagonal), listed as distinct tuples;
//   U  = the D leg of site (r-1, c);
//   R  = (h, dg, ad): projection of x on the horizontal edge, the diagonal
//        component of U passed on to (r, c+1), and the anti-diagonal
//        component of U(r, c+1) passed back to (r, c);
//   L  = R of site (r, c-1).
// Each site absorbs its own local energy and the energies of its edges to the
// upper, left, upper-left and upper-right neighbours.
//
// Boundary MPSs are built from the bottom: boundary(r) is the contraction of
// rows r..R-1 with the U legs of row r left open.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "spinbench/model.hpp"
#include "spinbench/potts.hpp"

namespace spinbench {

struct PepsSite {
    int d = 1;
    /// exp(-beta E_x).
    Eigen::VectorXd w_local;

    int u_dim = 1;
    /// Components of each U index.
    std::vector<int> u_v, u_dg, u_ad;
    /// [component][x] Boltzmann factors of the upper, left, upper-left and upper-right edges.
    Eigen::MatrixXd w_v, w_h, w_dg, w_ad;

    /// Left bond components (h_in, dg_in, ad_out) and right (h_out, dg_out, ad_in).
    int lh = 1, ldg = 1, lad = 1;
    int rh = 1, rdg = 1, rad = 1;
    std::vector<int> p_h;

    int d_dim = 1;
    std::vector<int> down;
    std::vector<int> d_v, d_dg, d_ad;

    int left_dim() const { return lh * ldg * lad; }
    int right_dim() const { return rh * rdg * rad; }
};

struct PepsNetwork {
    /// The (transformed) Potts model the network encodes.
    PottsHamiltonian potts;
    double beta = 1.0;
    int transform = 0;
    std::vector<PepsSite> sites;

    int rows() const { return potts.rows; }
    int cols() const { return potts.cols; }
    const PepsSite& site(int r, int c) const { return sites[r * potts.cols + c]; }
};

PepsNetwork build_peps(const PottsHamiltonian& potts, double beta, int transform = 0);

/// Three-index tensor A[left, phys, right], row-major.
struct MpsTensor {
    int dl = 1, dp = 1, dr = 1;
    std::vector<double> data;

    MpsTensor() = default;
    MpsTensor(int l, int p, int r) : dl(l), dp(p), dr(r), data(static_cast<std::size_t>(l) * p * r, 0.0) {}
    double& operator()(int l, int p, int r) { return data[(static_cast<std::size_t>(l) * dp + p) * dr + r]; }
    double operator()(int l, int p, int r) const { return data[(static_cast<std::size_t>(l) * dp + p) * dr + r]; }
};

struct BoundaryMps {
    std::vector<MpsTensor> tensors;
    /// The represented vector is exp(log_scale) times the chain.
    double log_scale = 0.0;
    int chi = 0;
    double tol = 0.0;
    int sweeps = 0;
    /// Sum over all compressions of the relative discarded squared singular values.
    double discarded_weight = 0.0;

    int max_bond() const;
};

struct ContractionParams {
    int chi = 32;
    double tol = 1e-12;
    int sweeps = 1;
};

/// Trivial boundary below the last row.
BoundaryMps empty_boundary(const PepsNetwork& net);
/// boundary(row) from boundary(row + 1).
BoundaryMps absorb_row(const PepsNetwork& net, int row, const BoundaryMps& below, const ContractionParams& params);
/// boundary(row), computed from the bottom row upward.
BoundaryMps boundary_mps(const PepsNetwork& net, int row, const ContractionParams& params);

/// ln Z from boundary(0).
double log_partition(const PepsNetwork& net, const ContractionParams& params);

/// Conditional distributions p(x_next | prefix) in row-major sweep order.
/// Holds its own copy of the network. Boundaries are computed once; right
/// environments are memoized per row.
class PepsContractor {
  public:
    PepsContractor(const PepsNetwork& net, const ContractionParams& params);

    const PepsNetwork& network() const { return net_; }
    const BoundaryMps& boundary(int row) const { return boundaries_[row]; }
    double discarded_weight() const;

    /// `prefix` assigns every node before `next`; `next` is prefix.size().
    Eigen::VectorXd conditional(std::span<const int> prefix);

    /// Left environment at column 0 of a row.
    Eigen::VectorXd start_env() const { return Eigen::VectorXd::Ones(1); }
    /// Unnormalized p(x | env) for every x of site (row, col), plus the advanced environments.
    Eigen::VectorXd branch(int row, int col, std::span<const int> upper_row, const Eigen::VectorXd& env,
                           std::vector<Eigen::VectorXd>* next_envs);
    Eigen::VectorXd advance(int row, int col, int u, int x, const Eigen::VectorXd& env) const;

    /// Drops memoized right environments (called when a row is finished).
    void clear_cache() { cache_.clear(); }

  private:
    const Eigen::VectorXd& right_env(int row, int col, std::span<const int> upper_row);
    int u_index(int row, int col, std::span<const int> upper_row) const;

    PepsNetwork net_;
    std::vector<BoundaryMps> boundaries_;
    int cache_row_ = -1;
    std::map<std::pair<int, std::vector<int>>, Eigen::VectorXd> cache_;
};

/// Normalizes a vector of non-negative weights; throws ContractionError when
/// nothing positive is left.
Eigen::VectorXd normalize_probabilities(const Eigen::VectorXd& w);

struct DropletParams {
    bool enabled = false;
    double max_energy = 0.0;
    int min_hamming = 1;
};

struct Droplet {
    /// 1 where the spin is flipped relative to the reference.
    std::vector<std::uint8_t> mask;
    double excitation = 0.0;
    int size = 0;
};

struct SolutionEntry {
    /// Indexed by cell of the transformed grid.
    std::vector<int> potts;
    SpinConfig spins;
    double energy = 0.0;
    double log_prob = 0.0;
    int degeneracy = 1;
};

struct SearchSolution {
    /// Ascending energy; ties by descending probability.
    std::vector<SolutionEntry> entries;
    double largest_discarded_probability = 0.0;
    double discarded_weight = 0.0;
    int transform = 0;
    std::vector<Droplet> droplets;

    double best_energy() const { return entries.front().energy; }
};

struct SearchParams {
    double beta = 2.0;
    ContractionParams contraction;
    int max_states = 256;
    double cutoff = 0.0;
    DropletParams droplets;
};

/// Beam search over the sweep order; the retained states are decoded and
/// re-ranked by their Ising energy under `model`.
SearchSolution branch_and_bound(const PepsNetwork& net, const IsingModel& model, const SearchParams& params);

/// Greedy in energy order over the retained states.
std::vector<Droplet> extract_droplets(const SearchSolution& solution, const IsingModel& model,
                                      const SpinConfig& reference, double max_energy, int min_hamming);

struct TransformedSolution {
    SearchSolution best;
    /// Best energy per transform that was run, in the order run.
    std::vector<std::pair<int, double>> per_transform;
};

TransformedSolution solve_with_transforms(const IsingModel& model, const ClusterLayout& layout,
                                          const SearchParams& params, std::span<const int> transforms,
                                          int workers = 1);

}  // namespace spinbench
