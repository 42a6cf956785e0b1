// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ising and QUBO cost functions, exact conversions between them, and exact
// Gibbs distributions for small systems.
//
// Spin indices are 0-based in memory; the COO file format (instances.hpp)
// is 1-based.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "spinbench/errors.hpp"

namespace spinbench {

/// Entries in {-1, +1}.
using SpinConfig = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;
/// Entries in {0, 1}.
using BinaryConfig = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;

struct Coupling {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct Neighbor {
    int index = 0;
    double coupling = 0.0;
};

/// H(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i.
///
/// Couplings are stored once per unordered pair, sorted lexicographically by
/// (i, j) with i < j. Duplicate pairs and self-loops are rejected.
class IsingModel {
  public:
    IsingModel() = default;
    IsingModel(int num_spins, std::vector<Coupling> couplings, Eigen::VectorXd fields);
    /// Zero fields.
    IsingModel(int num_spins, std::vector<Coupling> couplings);

    int num_spins() const noexcept { return num_spins_; }
    std::span<const Coupling> couplings() const noexcept { return couplings_; }
    const Eigen::VectorXd& fields() const noexcept { return fields_; }
    double field(int i) const { return fields_[i]; }
    std::span<const Neighbor> neighbors(int i) const {
        return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
    }

    /// Symmetric J + J^T as a sparse matrix.
    Eigen::SparseMatrix<double> symmetric_couplings() const;

    /// h_i + sum_j J_ij s_j.
    template <class Derived>
    double local_field(int i, const Eigen::MatrixBase<Derived>& s) const {
        double f = fields_[i];
        for (const auto& nb : neighbors(i)) f += nb.coupling * static_cast<double>(s[nb.index]);
        return f;
    }

    bool has_fields() const { return (fields_.array() != 0.0).any(); }

    friend bool operator==(const IsingModel& a, const IsingModel& b);

  private:
    void build_adjacency();

    int num_spins_ = 0;
    std::vector<Coupling> couplings_;
    Eigen::VectorXd fields_;
    std::vector<Neighbor> adjacency_;
    std::vector<std::size_t> offsets_{0};
};

template <class Derived>
void check_length(const IsingModel& model, const Eigen::MatrixBase<Derived>& s) {
    if (s.size() != model.num_spins())
        throw DimensionError("configuration has " + std::to_string(s.size()) + " entries, model has " +
                             std::to_string(model.num_spins()) + " spins");
}

/// Term-by-term evaluation: couplings in stored order, then fields.
template <class Derived>
double energy(const IsingModel& model, const Eigen::MatrixBase<Derived>& s) {
    check_length(model, s);
    double e = 0.0;
    for (const auto& c : model.couplings())
        e += c.value * static_cast<double>(s[c.i]) * static_cast<double>(s[c.j]);
    for (int i = 0; i < model.num_spins(); ++i) e += model.field(i) * static_cast<double>(s[i]);
    return e;
}

/// Energy change from flipping spin k: -2 s_k (h_k + sum_j J_kj s_j).
template <class Derived>
double flip_delta(const IsingModel& model, const Eigen::MatrixBase<Derived>& s, int k) {
    return -2.0 * static_cast<double>(s[k]) * model.local_field(k, s);
}

/// E(x) = sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j.
class QuboModel {
  public:
    QuboModel() = default;
    QuboModel(int num_vars, std::vector<Coupling> off_diagonal, Eigen::VectorXd diagonal);

    /// Folds a full matrix into upper-triangular form by adding Q_ij + Q_ji.
    static QuboModel from_dense(const Eigen::MatrixXd& q);

    int num_vars() const noexcept { return num_vars_; }
    std::span<const Coupling> off_diagonal() const noexcept { return off_diagonal_; }
    const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }

    Eigen::MatrixXd to_dense_upper() const;

  private:
    int num_vars_ = 0;
    std::vector<Coupling> off_diagonal_;
    Eigen::VectorXd diagonal_;
};

template <class Derived>
double qubo_energy(const QuboModel& q, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != q.num_vars()) throw DimensionError("binary vector length does not match QUBO size");
    double e = 0.0;
    for (const auto& c : q.off_diagonal())
        e += c.value * static_cast<double>(x[c.i]) * static_cast<double>(x[c.j]);
    for (int i = 0; i < q.num_vars(); ++i) e += q.diagonal()[i] * static_cast<double>(x[i]);
    return e;
}

struct QuboWithOffset {
    QuboModel qubo;
    double offset = 0.0;
};

struct IsingWithOffset {
    IsingModel model;
    double offset = 0.0;
};

/// H(s) = E_QUBO(x(s)) + offset.
QuboWithOffset ising_to_qubo(const IsingModel& model);
/// E_QUBO(x) = H(s(x)) + offset.
IsingWithOffset qubo_to_ising(const QuboModel& qubo);

/// x = (s + 1) / 2.
BinaryConfig spins_to_binary(const SpinConfig& s);
/// s = 2x - 1.
SpinConfig binary_to_spins(const BinaryConfig& x);

/// Lexicographic index: spin 0 is the most significant digit, -1 -> 0, +1 -> 1.
SpinConfig config_from_index(int num_spins, std::uint64_t index);
std::uint64_t index_of(const SpinConfig& s);

bool lex_less(const SpinConfig& a, const SpinConfig& b);
int hamming(const SpinConfig& a, const SpinConfig& b);

inline constexpr int kDefaultEnumerationCap = 20;

struct GibbsTable {
    double beta = 0.0;
    double log_partition = 0.0;
    /// Indexed by `index_of(config)`.
    Eigen::VectorXd probabilities;
    Eigen::VectorXd energies;
};

GibbsTable gibbs_table(const IsingModel& model, double beta, int cap = kDefaultEnumerationCap);

double log_sum_exp(std::span<const double> terms);

}  // namespace spinbench
