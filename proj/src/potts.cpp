// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/potts.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace spinbench {

namespace {

Projector make_projector(int k, const std::vector<int>& boundary) {
    Projector p;
    p.source_dim = 1 << k;
    const int nb = static_cast<int>(boundary.size());
    p.reduced_dim = 1 << nb;
    p.map.resize(p.source_dim);
    for (int x = 0; x < p.source_dim; ++x) {
        int bar = 0;
        for (int j = 0; j < nb; ++j) bar = (bar << 1) | ((x >> (k - 1 - boundary[j])) & 1);
        p.map[x] = bar;
    }
    return p;
}

}  // namespace

ProjectedPair build_projectors(int k_m, int k_n, std::span<const CrossCoupling> couplings) {
    std::vector<int> bm, bn;
    for (const auto& c : couplings) {
        if (c.pos_m < 0 || c.pos_m >= k_m || c.pos_n < 0 || c.pos_n >= k_n)
            throw StructureError("cross coupling position outside its cell");
        bm.push_back(c.pos_m);
        bn.push_back(c.pos_n);
    }
    std::sort(bm.begin(), bm.end());
    bm.erase(std::unique(bm.begin(), bm.end()), bm.end());
    std::sort(bn.begin(), bn.end());
    bn.erase(std::unique(bn.begin(), bn.end()), bn.end());

    ProjectedPair out{make_projector(k_m, bm), make_projector(k_n, bn), {}};
    const int dm = out.pm.reduced_dim;
    const int dn = out.pn.reduced_dim;
    auto rank = [](const std::vector<int>& b, int pos) {
        return static_cast<int>(std::lower_bound(b.begin(), b.end(), pos) - b.begin());
    };
    out.energy = Eigen::MatrixXd::Zero(dm, dn);
    const int nbm = static_cast<int>(bm.size());
    const int nbn = static_cast<int>(bn.size());
    for (int a = 0; a < dm; ++a)
        for (int b = 0; b < dn; ++b) {
            double e = 0.0;
            for (const auto& c : couplings)
                e += c.value * cell_spin(a, nbm, rank(bm, c.pos_m)) * cell_spin(b, nbn, rank(bn, c.pos_n));
            out.energy(a, b) = e;
        }
    return out;
}

const PottsEdge* PottsHamiltonian::edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                               [](const PottsEdge& e, const std::pair<int, int>& key) {
                                   return std::pair{e.m, e.n} < key;
                               });
    if (it == edges.end() || it->m != a || it->n != b) return nullptr;
    return &*it;
}

SpinConfig PottsHamiltonian::decode(std::span<const int> states) const {
    if (static_cast<int>(states.size()) != num_cells()) throw DimensionError("Potts configuration length mismatch");
    SpinConfig s(num_spins);
    for (int n = 0; n < num_cells(); ++n) {
        const int k = static_cast<int>(members[n].size());
        if (states[n] < 0 || states[n] >= (1 << k)) throw DomainError("Potts state out of range");
        for (int b = 0; b < k; ++b) s[members[n][b]] = static_cast<std::int8_t>(cell_spin(states[n], k, b));
    }
    return s;
}

std::vector<int> PottsHamiltonian::encode(const SpinConfig& s) const {
    if (s.size() != num_spins) throw DimensionError("configuration length mismatch");
    std::vector<int> x(num_cells(), 0);
    for (int n = 0; n < num_cells(); ++n)
        for (int spin : members[n]) x[n] = (x[n] << 1) | (s[spin] > 0 ? 1 : 0);
    return x;
}

double PottsHamiltonian::energy(std::span<const int> states) const {
    if (static_cast<int>(states.size()) != num_cells()) throw DimensionError("Potts configuration length mismatch");
    double e = 0.0;
    for (int n = 0; n < num_cells(); ++n) e += local[n][states[n]];
    for (const auto& ed : edges) e += ed.pair_energy(states[ed.m], states[ed.n]);
    return e;
}

PottsHamiltonian cluster_to_potts(const IsingModel& model, const ClusterLayout& layout, int cap) {
    const int n = model.num_spins();
    if (layout.rows < 1 || layout.cols < 1) throw StructureError("cluster grid must be at least 1x1");
    if (static_cast<int>(layout.cell_of.size()) != n)
        throw StructureError("cluster assignment covers " + std::to_string(layout.cell_of.size()) + " spins, model has " +
                             std::to_string(n));
    PottsHamiltonian p;
    p.rows = layout.rows;
    p.cols = layout.cols;
    p.num_spins = n;
    const int cells = layout.rows * layout.cols;
    p.members.assign(cells, {});
    for (int i = 0; i < n; ++i) {
        const int c = layout.cell_of[i];
        if (c < 0 || c >= cells) throw StructureError("spin " + std::to_string(i) + " is not assigned to a cell");
        p.members[c].push_back(i);
    }
    std::vector<int> position(n);
    for (int c = 0; c < cells; ++c) {
        if (static_cast<int>(p.members[c].size()) > cap)
            throw StructureError("cell " + std::to_string(c) + " has " + std::to_string(p.members[c].size()) +
                                 " spins, cap is " + std::to_string(cap));
        for (std::size_t b = 0; b < p.members[c].size(); ++b) position[p.members[c][b]] = static_cast<int>(b);
    }

    p.local.resize(cells);
    for (int c = 0; c < cells; ++c) {
        const int k = static_cast<int>(p.members[c].size());
        p.local[c] = Eigen::VectorXd::Zero(1 << k);
        for (int x = 0; x < (1 << k); ++x)
            for (int b = 0; b < k; ++b) p.local[c][x] += model.field(p.members[c][b]) * cell_spin(x, k, b);
    }

    std::map<std::pair<int, int>, std::vector<CrossCoupling>> crossing;
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c)
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc <= 0) continue;
                    const int r2 = r + dr, c2 = c + dc;
                    if (r2 >= p.rows || c2 < 0 || c2 >= p.cols) continue;
                    crossing[{p.cell(r, c), p.cell(r2, c2)}];
                }

    for (const auto& cp : model.couplings()) {
        const int a = layout.cell_of[cp.i], b = layout.cell_of[cp.j];
        if (a == b) {
            const int k = static_cast<int>(p.members[a].size());
            const int pi = position[cp.i], pj = position[cp.j];
            for (int x = 0; x < (1 << k); ++x) p.local[a][x] += cp.value * cell_spin(x, k, pi) * cell_spin(x, k, pj);
            continue;
        }
        const bool swap = a > b;
        auto it = crossing.find(swap ? std::pair{b, a} : std::pair{a, b});
        if (it == crossing.end())
            throw StructureError("coupling (" + std::to_string(cp.i) + ", " + std::to_string(cp.j) +
                                 ") joins cells that are not king neighbours");
        if (swap)
            it->second.push_back({position[cp.j], position[cp.i], cp.value});
        else
            it->second.push_back({position[cp.i], position[cp.j], cp.value});
    }

    for (const auto& [key, list] : crossing) {
        const int km = static_cast<int>(p.members[key.first].size());
        const int kn = static_cast<int>(p.members[key.second].size());
        auto proj = build_projectors(km, kn, list);
        p.edges.push_back({key.first, key.second, std::move(proj.pm), std::move(proj.pn), std::move(proj.energy)});
    }
    return p;
}

std::array<int, 2> transform_coords(int t, int rows, int cols, int r, int c) {
    switch (t) {
        case 0: return {r, c};
        case 1: return {c, rows - 1 - r};
        case 2: return {rows - 1 - r, cols - 1 - c};
        case 3: return {cols - 1 - c, r};
        case 4: return {r, cols - 1 - c};
        case 5: return {rows - 1 - r, c};
        case 6: return {c, r};
        case 7: return {cols - 1 - c, rows - 1 - r};
        default: throw std::invalid_argument("transform id must be in [0, 8)");
    }
}

PottsHamiltonian transform(const PottsHamiltonian& potts, int t) {
    const bool swaps = t == 1 || t == 3 || t == 6 || t == 7;
    PottsHamiltonian out;
    out.rows = swaps ? potts.cols : potts.rows;
    out.cols = swaps ? potts.rows : potts.cols;
    out.num_spins = potts.num_spins;
    const int cells = potts.num_cells();
    out.members.resize(cells);
    out.local.resize(cells);
    std::vector<int> to(cells);
    for (int r = 0; r < potts.rows; ++r)
        for (int c = 0; c < potts.cols; ++c) {
            const auto [r2, c2] = transform_coords(t, potts.rows, potts.cols, r, c);
            const int old = potts.cell(r, c), now = out.cell(r2, c2);
            to[old] = now;
            out.members[now] = potts.members[old];
            out.local[now] = potts.local[old];
        }
    for (const auto& e : potts.edges) {
        PottsEdge ne = e;
        ne.m = to[e.m];
        ne.n = to[e.n];
        if (ne.m > ne.n) {
            std::swap(ne.m, ne.n);
            std::swap(ne.pm, ne.pn);
            ne.energy = e.energy.transpose();
        }
        out.edges.push_back(std::move(ne));
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const PottsEdge& a, const PottsEdge& b) { return std::pair{a.m, a.n} < std::pair{b.m, b.n}; });
    return out;
}

}  // namespace spinbench
