// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spinbench {

namespace {

void normalize_pairs(int n, std::vector<Coupling>& pairs, const char* what) {
    for (auto& c : pairs) {
        if (c.i < 0 || c.j < 0 || c.i >= n || c.j >= n)
            throw StructureError(std::string(what) + " endpoint out of range: (" + std::to_string(c.i) + ", " +
                                 std::to_string(c.j) + ")");
        if (c.i == c.j)
            throw StructureError(std::string(what) + " self-loop on " + std::to_string(c.i) +
                                 "; diagonal terms belong to the linear part");
        if (c.i > c.j) std::swap(c.i, c.j);
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Coupling& a, const Coupling& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        if (pairs[k].i == pairs[k - 1].i && pairs[k].j == pairs[k - 1].j)
            throw StructureError(std::string("duplicate ") + what + " (" + std::to_string(pairs[k].i) + ", " +
                                 std::to_string(pairs[k].j) + ")");
    }
}

}  // namespace

IsingModel::IsingModel(int num_spins, std::vector<Coupling> couplings, Eigen::VectorXd fields)
    : num_spins_(num_spins), couplings_(std::move(couplings)), fields_(std::move(fields)) {
    if (num_spins < 0) throw DimensionError("negative spin count");
    if (fields_.size() != num_spins) throw DimensionError("field vector length does not match spin count");
    normalize_pairs(num_spins_, couplings_, "coupling");
    build_adjacency();
}

IsingModel::IsingModel(int num_spins, std::vector<Coupling> couplings)
    : IsingModel(num_spins, std::move(couplings), Eigen::VectorXd::Zero(num_spins)) {}

void IsingModel::build_adjacency() {
    std::vector<std::size_t> degree(num_spins_, 0);
    for (const auto& c : couplings_) {
        ++degree[c.i];
        ++degree[c.j];
    }
    offsets_.assign(num_spins_ + 1, 0);
    for (int i = 0; i < num_spins_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& c : couplings_) {
        adjacency_[fill[c.i]++] = {c.j, c.value};
        adjacency_[fill[c.j]++] = {c.i, c.value};
    }
}

Eigen::SparseMatrix<double> IsingModel::symmetric_couplings() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * couplings_.size());
    for (const auto& c : couplings_) {
        triplets.emplace_back(c.i, c.j, c.value);
        triplets.emplace_back(c.j, c.i, c.value);
    }
    Eigen::SparseMatrix<double> j(num_spins_, num_spins_);
    j.setFromTriplets(triplets.begin(), triplets.end());
    return j;
}

bool operator==(const IsingModel& a, const IsingModel& b) {
    if (a.num_spins_ != b.num_spins_ || a.couplings_.size() != b.couplings_.size()) return false;
    for (std::size_t k = 0; k < a.couplings_.size(); ++k) {
        const auto& x = a.couplings_[k];
        const auto& y = b.couplings_[k];
        if (x.i != y.i || x.j != y.j || x.value != y.value) return false;
    }
    return a.fields_ == b.fields_;
}

QuboModel::QuboModel(int num_vars, std::vector<Coupling> off_diagonal, Eigen::VectorXd diagonal)
    : num_vars_(num_vars), off_diagonal_(std::move(off_diagonal)), diagonal_(std::move(diagonal)) {
    if (diagonal_.size() != num_vars) throw DimensionError("QUBO diagonal length does not match size");
    normalize_pairs(num_vars_, off_diagonal_, "QUBO entry");
}

QuboModel QuboModel::from_dense(const Eigen::MatrixXd& q) {
    if (q.rows() != q.cols()) throw DimensionError("QUBO matrix must be square");
    const int n = static_cast<int>(q.rows());
    std::vector<Coupling> off;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = q(i, j) + q(j, i);
            if (v != 0.0) off.push_back({i, j, v});
        }
    return QuboModel(n, std::move(off), q.diagonal());
}

Eigen::MatrixXd QuboModel::to_dense_upper() const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(num_vars_, num_vars_);
    q.diagonal() = diagonal_;
    for (const auto& c : off_diagonal_) q(c.i, c.j) = c.value;
    return q;
}

QuboWithOffset ising_to_qubo(const IsingModel& model) {
    const int n = model.num_spins();
    Eigen::VectorXd diag = 2.0 * model.fields();
    std::vector<Coupling> off;
    off.reserve(model.couplings().size());
    double offset = 0.0;
    for (const auto& c : model.couplings()) {
        off.push_back({c.i, c.j, 4.0 * c.value});
        diag[c.i] -= 2.0 * c.value;
        diag[c.j] -= 2.0 * c.value;
        offset += c.value;
    }
    offset -= model.fields().sum();
    return {QuboModel(n, std::move(off), std::move(diag)), offset};
}

IsingWithOffset qubo_to_ising(const QuboModel& qubo) {
    const int n = qubo.num_vars();
    Eigen::VectorXd h = 0.5 * qubo.diagonal();
    std::vector<Coupling> couplings;
    couplings.reserve(qubo.off_diagonal().size());
    double offset = 0.5 * qubo.diagonal().sum();
    for (const auto& c : qubo.off_diagonal()) {
        couplings.push_back({c.i, c.j, 0.25 * c.value});
        h[c.i] += 0.25 * c.value;
        h[c.j] += 0.25 * c.value;
        offset += 0.25 * c.value;
    }
    return {IsingModel(n, std::move(couplings), std::move(h)), offset};
}

BinaryConfig spins_to_binary(const SpinConfig& s) {
    BinaryConfig x(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] != 1 && s[i] != -1)
            throw DomainError("spin entry " + std::to_string(i) + " is " + std::to_string(int(s[i])) +
                              ", expected -1 or +1");
        x[i] = static_cast<std::int8_t>((s[i] + 1) / 2);
    }
    return x;
}

SpinConfig binary_to_spins(const BinaryConfig& x) {
    SpinConfig s(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0 && x[i] != 1)
            throw DomainError("binary entry " + std::to_string(i) + " is " + std::to_string(int(x[i])) +
                              ", expected 0 or 1");
        s[i] = static_cast<std::int8_t>(2 * x[i] - 1);
    }
    return s;
}

SpinConfig config_from_index(int num_spins, std::uint64_t index) {
    SpinConfig s(num_spins);
    for (int i = 0; i < num_spins; ++i) s[i] = ((index >> (num_spins - 1 - i)) & 1U) ? 1 : -1;
    return s;
}

std::uint64_t index_of(const SpinConfig& s) {
    std::uint64_t k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) k = (k << 1) | (s[i] > 0 ? 1U : 0U);
    return k;
}

bool lex_less(const SpinConfig& a, const SpinConfig& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int hamming(const SpinConfig& a, const SpinConfig& b) {
    if (a.size() != b.size()) throw DimensionError("hamming distance between configurations of different length");
    return static_cast<int>((a.array() != b.array()).count());
}

double log_sum_exp(std::span<const double> terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - m);
    return m + std::log(acc);
}

GibbsTable gibbs_table(const IsingModel& model, double beta, int cap) {
    const int n = model.num_spins();
    if (n > cap) throw CapacityError("gibbs_table: " + std::to_string(n) + " spins exceeds cap " + std::to_string(cap));
    if (!(beta >= 0.0)) throw std::invalid_argument("gibbs_table: beta must be non-negative");
    const std::uint64_t count = std::uint64_t{1} << n;
    GibbsTable table;
    table.beta = beta;
    table.energies.resize(static_cast<Eigen::Index>(count));
    std::vector<double> log_weights(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        const double e = energy(model, config_from_index(n, k));
        table.energies[static_cast<Eigen::Index>(k)] = e;
        log_weights[k] = -beta * e;
    }
    table.log_partition = log_sum_exp(log_weights);
    table.probabilities.resize(static_cast<Eigen::Index>(count));
    for (std::uint64_t k = 0; k < count; ++k)
        table.probabilities[static_cast<Eigen::Index>(k)] = std::exp(log_weights[k] - table.log_partition);
    return table;
}

}  // namespace spinbench
