// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/peps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "spinbench/sample_set.hpp"

namespace spinbench {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;

/// [a][x] = exp(-beta Ebar(a, P(x))) for the edge entering the site as its second endpoint.
Eigen::MatrixXd incoming_weights(const PottsEdge* e, int d, double beta) {
    if (e == nullptr) return Eigen::MatrixXd::Ones(1, d);
    Eigen::MatrixXd w(e->pm.reduced_dim, d);
    for (int a = 0; a < e->pm.reduced_dim; ++a)
        for (int x = 0; x < d; ++x) w(a, x) = std::exp(-beta * e->energy(a, e->pn.map[x]));
    return w;
}

int source_dim(const PottsEdge* e) { return e ? e->pm.reduced_dim : 1; }

}  // namespace

PepsNetwork build_peps(const PottsHamiltonian& input, double beta, int t) {
    if (!(beta >= 0.0)) throw std::invalid_argument("build_peps: beta must be non-negative");
    PepsNetwork net;
    net.potts = transform(input, t);
    net.beta = beta;
    net.transform = t;
    const auto& p = net.potts;
    const int rows = p.rows, cols = p.cols;
    auto edge = [&](int r1, int c1, int r2, int c2) -> const PottsEdge* {
        if (r1 < 0 || r2 < 0 || r1 >= rows || r2 >= rows || c1 < 0 || c2 < 0 || c1 >= cols || c2 >= cols)
            return nullptr;
        return p.edge(p.cell(r1, c1), p.cell(r2, c2));
    };

    net.sites.resize(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            PepsSite& s = net.sites[r * cols + c];
            const int d = p.dim(p.cell(r, c));
            s.d = d;
            s.w_local = (-beta * p.local[p.cell(r, c)]).array().exp();

            const PottsEdge* dv = edge(r, c, r + 1, c);
            const PottsEdge* ddg = edge(r, c, r + 1, c + 1);
            const PottsEdge* dad = edge(r, c, r + 1, c - 1);
            std::map<std::tuple<int, int, int>, int> tuples;
            s.down.resize(d);
            for (int x = 0; x < d; ++x) {
                const std::tuple key{dv ? dv->pm.map[x] : 0, ddg ? ddg->pm.map[x] : 0, dad ? dad->pm.map[x] : 0};
                auto [it, inserted] = tuples.emplace(key, static_cast<int>(s.d_v.size()));
                if (inserted) {
                    s.d_v.push_back(std::get<0>(key));
                    s.d_dg.push_back(std::get<1>(key));
                    s.d_ad.push_back(std::get<2>(key));
                }
                s.down[x] = it->second;
            }
            s.d_dim = static_cast<int>(s.d_v.size());

            const PottsEdge* rh = edge(r, c, r, c + 1);
            s.rh = source_dim(rh);
            s.p_h.resize(d);
            for (int x = 0; x < d; ++x) s.p_h[x] = rh ? rh->pm.map[x] : 0;

            if (r > 0) {
                const PepsSite& above = net.sites[(r - 1) * cols + c];
                s.u_dim = above.d_dim;
                s.u_v = above.d_v;
                s.u_dg = above.d_dg;
                s.u_ad = above.d_ad;
            } else {
                s.u_dim = 1;
                s.u_v = s.u_dg = s.u_ad = {0};
            }

            const PottsEdge* ev = edge(r - 1, c, r, c);
            const PottsEdge* eh = edge(r, c - 1, r, c);
            const PottsEdge* edg = edge(r - 1, c - 1, r, c);
            const PottsEdge* ead = edge(r - 1, c + 1, r, c);
            s.w_v = incoming_weights(ev, d, beta);
            s.w_h = incoming_weights(eh, d, beta);
            s.w_dg = incoming_weights(edg, d, beta);
            s.w_ad = incoming_weights(ead, d, beta);
            s.lh = source_dim(eh);
            s.ldg = source_dim(edg);
            s.lad = source_dim(edge(r - 1, c, r, c - 1));
            s.rdg = source_dim(edge(r - 1, c, r, c + 1));
            s.rad = source_dim(ead);
        }
    }
    return net;
}

int BoundaryMps::max_bond() const {
    int m = 1;
    for (const auto& t : tensors) m = std::max({m, t.dl, t.dr});
    return m;
}

BoundaryMps empty_boundary(const PepsNetwork& net) {
    BoundaryMps b;
    for (int c = 0; c < net.cols(); ++c) {
        MpsTensor t(1, 1, 1);
        t(0, 0, 0) = 1.0;
        b.tensors.push_back(std::move(t));
    }
    return b;
}

namespace {

MpsTensor from_rows(const RowMat& m, int dl, int dp, int dr) {
    MpsTensor t(dl, dp, dr);
    RowMap(t.data.data(), m.rows(), m.cols()) = m;
    return t;
}

/// A[c] <- A[c] contracted with `r` on its left bond.
void absorb_left(MpsTensor& a, const RowMat& r) {
    const RowMat m = r * ConstRowMap(a.data.data(), a.dl, a.dp * a.dr);
    a = from_rows(m, static_cast<int>(r.rows()), a.dp, a.dr);
}

void absorb_right(MpsTensor& a, const RowMat& r) {
    const RowMat m = ConstRowMap(a.data.data(), a.dl * a.dp, a.dr) * r;
    a = from_rows(m, a.dl, a.dp, static_cast<int>(r.cols()));
}

void left_canonicalize(std::vector<MpsTensor>& mps, std::size_t upto) {
    for (std::size_t c = 0; c + 1 < mps.size() && c < upto; ++c) {
        auto& a = mps[c];
        const RowMat m = ConstRowMap(a.data.data(), a.dl * a.dp, a.dr);
        Eigen::HouseholderQR<RowMat> qr(m);
        const int k = static_cast<int>(std::min(m.rows(), m.cols()));
        const RowMat q = qr.householderQ() * RowMat::Identity(m.rows(), k);
        const RowMat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        a = from_rows(q, a.dl, a.dp, k);
        absorb_left(mps[c + 1], r);
    }
}

double frobenius(const MpsTensor& a) {
    return Eigen::Map<const Eigen::VectorXd>(a.data.data(), static_cast<Eigen::Index>(a.data.size())).norm();
}

/// Truncating right-to-left SVD sweep over a left-canonical chain.
double svd_truncate(std::vector<MpsTensor>& mps, int chi, double tol) {
    double discarded = 0.0;
    for (std::size_t c = mps.size() - 1; c > 0; --c) {
        auto& a = mps[c];
        const RowMat m = ConstRowMap(a.data.data(), a.dl, a.dp * a.dr);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& s = svd.singularValues();
        if (s.size() == 0 || !(s[0] > 0.0)) throw ContractionError("boundary MPS lost all weight during compression");
        int keep = 0;
        while (keep < s.size() && keep < chi && s[keep] > tol * s[0]) ++keep;
        keep = std::max(keep, 1);
        const double total = s.squaredNorm();
        discarded += s.tail(s.size() - keep).squaredNorm() / total;
        const RowMat vt = svd.matrixV().leftCols(keep).transpose();
        a = from_rows(vt, keep, a.dp, a.dr);
        const RowMat us = svd.matrixU().leftCols(keep) * s.head(keep).asDiagonal();
        absorb_right(mps[c - 1], us);
    }
    return discarded;
}

/// Single-site variational fit of `fit` to `target`; `fit` enters right-canonical
/// with its center at site 0 and leaves the same way.
void variational_sweeps(std::vector<MpsTensor>& fit, const std::vector<MpsTensor>& target, int sweeps, double tol) {
    const std::size_t n = fit.size();
    if (n < 2 || sweeps <= 0) return;
    // env[c] couples the bonds left (L) or right (R) of site c: rows index `fit`, cols `target`.
    std::vector<RowMat> left(n + 1), right(n + 1);
    auto build_right = [&](std::size_t c) {
        // right[c] is the environment right of site c.
        const auto& f = fit[c];
        const auto& t = target[c];
        const RowMat x = ConstRowMap(t.data.data(), t.dl * t.dp, t.dr) * right[c].transpose();
        const RowMat xr = ConstRowMap(x.data(), t.dl, t.dp * f.dr);
        right[c - 1] = ConstRowMap(f.data.data(), f.dl, f.dp * f.dr) * xr.transpose();
    };
    auto build_left = [&](std::size_t c) {
        const auto& f = fit[c];
        const auto& t = target[c];
        const RowMat y = left[c] * ConstRowMap(t.data.data(), t.dl, t.dp * t.dr);
        left[c + 1] = ConstRowMap(f.data.data(), f.dl * f.dp, f.dr).transpose() * ConstRowMap(y.data(), f.dl * t.dp, t.dr);
    };
    auto update = [&](std::size_t c) {
        const auto& t = target[c];
        const RowMat y = left[c] * ConstRowMap(t.data.data(), t.dl, t.dp * t.dr);
        const int dl = static_cast<int>(left[c].rows());
        const RowMat z = ConstRowMap(y.data(), dl * t.dp, t.dr) * right[c].transpose();
        fit[c] = from_rows(z, dl, t.dp, static_cast<int>(right[c].rows()));
    };

    double previous = -1.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        right[n - 1] = RowMat::Ones(1, 1);
        for (std::size_t c = n - 1; c > 0; --c) build_right(c);
        left[0] = RowMat::Ones(1, 1);
        for (std::size_t c = 0; c < n; ++c) {
            update(c);
            if (c + 1 < n) {
                auto& a = fit[c];
                const RowMat m = ConstRowMap(a.data.data(), a.dl * a.dp, a.dr);
                Eigen::HouseholderQR<RowMat> qr(m);
                const int k = static_cast<int>(std::min(m.rows(), m.cols()));
                const RowMat q = qr.householderQ() * RowMat::Identity(m.rows(), k);
                a = from_rows(q, a.dl, a.dp, k);
                build_left(c);
            }
        }
        right[n - 1] = RowMat::Ones(1, 1);
        for (std::size_t c = n - 1;; --c) {
            update(c);
            if (c == 0) break;
            auto& a = fit[c];
            const RowMat m = ConstRowMap(a.data.data(), a.dl, a.dp * a.dr);
            const RowMat mt = m.transpose();
            Eigen::HouseholderQR<RowMat> qr(mt);
            const int k = static_cast<int>(std::min(mt.rows(), mt.cols()));
            const RowMat q = qr.householderQ() * RowMat::Identity(mt.rows(), k);
            a = from_rows(q.transpose(), k, a.dp, a.dr);
            build_right(c);
        }
        const double norm = frobenius(fit[0]);
        if (previous >= 0.0 && std::abs(norm - previous) <= tol * norm) break;
        previous = norm;
    }
}

}  // namespace

BoundaryMps absorb_row(const PepsNetwork& net, int row, const BoundaryMps& below, const ContractionParams& params) {
    if (params.chi < 1) throw std::invalid_argument("boundary MPS: chi must be >= 1");
    const int cols = net.cols();
    std::vector<MpsTensor> raw(cols);
    for (int c = 0; c < cols; ++c) {
        const PepsSite& s = net.site(row, c);
        const MpsTensor& b = below.tensors[c];
        const int al = b.dl, ar = b.dr;
        MpsTensor t(s.left_dim() * al, s.u_dim, s.right_dim() * ar);
        for (int u = 0; u < s.u_dim; ++u) {
            const int uv = s.u_v[u], ug = s.u_dg[u], ua = s.u_ad[u];
            for (int x = 0; x < s.d; ++x) {
                const int dd = s.down[x];
                const double base = s.w_local[x] * s.w_v(uv, x);
                if (base == 0.0) continue;
                for (int h = 0; h < s.lh; ++h)
                    for (int g = 0; g < s.ldg; ++g) {
                        const double wl = base * s.w_h(h, x) * s.w_dg(g, x);
                        const int l = (h * s.ldg + g) * s.lad + ua;
                        for (int ain = 0; ain < s.rad; ++ain) {
                            const double w = wl * s.w_ad(ain, x);
                            const int rr = (s.p_h[x] * s.rdg + ug) * s.rad + ain;
                            for (int a = 0; a < al; ++a)
                                for (int bb = 0; bb < ar; ++bb) t(l * al + a, u, rr * ar + bb) += w * b(a, dd, bb);
                        }
                    }
            }
        }
        raw[c] = std::move(t);
    }

    BoundaryMps out;
    out.chi = params.chi;
    out.tol = params.tol;
    out.sweeps = params.sweeps;
    out.log_scale = below.log_scale;
    out.discarded_weight = below.discarded_weight;
    out.tensors = raw;
    if (cols > 1) {
        left_canonicalize(out.tensors, out.tensors.size());
        out.discarded_weight += svd_truncate(out.tensors, params.chi, params.tol);
        variational_sweeps(out.tensors, raw, params.sweeps, params.tol);
    }
    const double norm = frobenius(out.tensors[0]);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ContractionError("boundary MPS norm is zero or not finite");
    for (double& v : out.tensors[0].data) v /= norm;
    out.log_scale += std::log(norm);
    return out;
}

BoundaryMps boundary_mps(const PepsNetwork& net, int row, const ContractionParams& params) {
    if (row < 0 || row > net.rows()) throw std::invalid_argument("boundary_mps: row out of range");
    BoundaryMps b = empty_boundary(net);
    for (int r = net.rows() - 1; r >= row; --r) b = absorb_row(net, r, b, params);
    return b;
}

double log_partition(const PepsNetwork& net, const ContractionParams& params) {
    const BoundaryMps b = boundary_mps(net, 0, params);
    RowMat v = RowMat::Ones(1, 1);
    for (const auto& t : b.tensors) {
        RowMat m(t.dl, t.dr);
        for (int l = 0; l < t.dl; ++l)
            for (int r = 0; r < t.dr; ++r) m(l, r) = t(l, 0, r);
        v = v * m;
    }
    const double z = v(0, 0);
    if (!(z > 0.0) || !std::isfinite(z)) throw ContractionError("partition function contraction is not positive");
    return std::log(z) + b.log_scale;
}

PepsContractor::PepsContractor(const PepsNetwork& net, const ContractionParams& params) : net_(net) {
    const int rows = net.rows();
    boundaries_.resize(rows + 1);
    boundaries_[rows] = empty_boundary(net);
    for (int r = rows - 1; r >= 1; --r) boundaries_[r] = absorb_row(net, r, boundaries_[r + 1], params);
}

double PepsContractor::discarded_weight() const {
    return boundaries_.size() > 1 ? boundaries_[1].discarded_weight : 0.0;
}

int PepsContractor::u_index(int row, int col, std::span<const int> upper_row) const {
    if (row == 0) return 0;
    return net_.site(row - 1, col).down[upper_row[col]];
}

Eigen::VectorXd PepsContractor::advance(int row, int col, int u, int x, const Eigen::VectorXd& env) const {
    const PepsSite& s = net_.site(row, col);
    const MpsTensor& b = boundaries_[row + 1].tensors[col];
    const int al = b.dl, ar = b.dr;
    const int dd = s.down[x];
    const int ug = s.u_dg[u], ua = s.u_ad[u];
    const double base = s.w_local[x] * s.w_v(s.u_v[u], x);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.right_dim()) * ar);
    if (base == 0.0) return out;
    Eigen::VectorXd f(ar);
    for (int h = 0; h < s.lh; ++h)
        for (int g = 0; g < s.ldg; ++g) {
            const double coef = base * s.w_h(h, x) * s.w_dg(g, x);
            if (coef == 0.0) continue;
            const int l = (h * s.ldg + g) * s.lad + ua;
            f.setZero();
            for (int a = 0; a < al; ++a) {
                const double e = env[l * al + a];
                if (e == 0.0) continue;
                for (int bb = 0; bb < ar; ++bb) f[bb] += e * b(a, dd, bb);
            }
            for (int ain = 0; ain < s.rad; ++ain) {
                const int rr = (s.p_h[x] * s.rdg + ug) * s.rad + ain;
                out.segment(static_cast<Eigen::Index>(rr) * ar, ar) += coef * s.w_ad(ain, x) * f;
            }
        }
    return out;
}

const Eigen::VectorXd& PepsContractor::right_env(int row, int col, std::span<const int> upper_row) {
    if (cache_row_ != row) {
        cache_.clear();
        cache_row_ = row;
    }
    const int cols = net_.cols();
    std::vector<int> key;
    for (int c = col; c < cols; ++c) key.push_back(u_index(row, c, upper_row));
    auto it = cache_.find({col, key});
    if (it != cache_.end()) return it->second;

    Eigen::VectorXd out;
    if (col == cols) {
        out = Eigen::VectorXd::Ones(1);
    } else {
        const Eigen::VectorXd next = right_env(row, col + 1, upper_row);
        const PepsSite& s = net_.site(row, col);
        const MpsTensor& b = boundaries_[row + 1].tensors[col];
        const int al = b.dl, ar = b.dr;
        const int u = key[0];
        const int ug = s.u_dg[u], ua = s.u_ad[u];
        out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.left_dim()) * al);
        Eigen::VectorXd y(al);
        for (int x = 0; x < s.d; ++x) {
            const int dd = s.down[x];
            const double base = s.w_local[x] * s.w_v(s.u_v[u], x);
            if (base == 0.0) continue;
            for (int ain = 0; ain < s.rad; ++ain) {
                const int rr = (s.p_h[x] * s.rdg + ug) * s.rad + ain;
                y.setZero();
                for (int a = 0; a < al; ++a)
                    for (int bb = 0; bb < ar; ++bb) y[a] += b(a, dd, bb) * next[static_cast<Eigen::Index>(rr) * ar + bb];
                const double wa = base * s.w_ad(ain, x);
                for (int h = 0; h < s.lh; ++h)
                    for (int g = 0; g < s.ldg; ++g) {
                        const int l = (h * s.ldg + g) * s.lad + ua;
                        out.segment(static_cast<Eigen::Index>(l) * al, al) += wa * s.w_h(h, x) * s.w_dg(g, x) * y;
                    }
            }
        }
        const double scale = out.cwiseAbs().maxCoeff();
        if (scale > 0.0) out /= scale;
    }
    return cache_.emplace(std::pair{col, std::move(key)}, std::move(out)).first->second;
}

Eigen::VectorXd PepsContractor::branch(int row, int col, std::span<const int> upper_row, const Eigen::VectorXd& env,
                                       std::vector<Eigen::VectorXd>* next_envs) {
    const PepsSite& s = net_.site(row, col);
    const Eigen::VectorXd& renv = right_env(row, col + 1, upper_row);
    const int u = u_index(row, col, upper_row);
    Eigen::VectorXd w(s.d);
    if (next_envs) next_envs->resize(s.d);
    for (int x = 0; x < s.d; ++x) {
        Eigen::VectorXd e = advance(row, col, u, x, env);
        w[x] = e.dot(renv);
        if (next_envs) (*next_envs)[x] = std::move(e);
    }
    return w;
}

Eigen::VectorXd normalize_probabilities(const Eigen::VectorXd& w) {
    Eigen::VectorXd p = w.cwiseMax(0.0);
    const double total = p.sum();
    if (!(total > 0.0) || !std::isfinite(total))
        throw ContractionError("conditional probabilities vanished; lower beta or raise chi");
    return p / total;
}

Eigen::VectorXd PepsContractor::conditional(std::span<const int> prefix) {
    const int cols = net_.cols();
    const int next = static_cast<int>(prefix.size());
    if (next >= net_.rows() * cols) throw std::invalid_argument("conditional: prefix already covers every node");
    const int row = next / cols, col = next % cols;
    const std::span<const int> upper = row > 0 ? prefix.subspan((row - 1) * cols, cols) : std::span<const int>{};
    Eigen::VectorXd env = start_env();
    for (int c = 0; c < col; ++c) {
        env = advance(row, c, u_index(row, c, upper), prefix[row * cols + c], env);
        const double scale = env.cwiseAbs().maxCoeff();
        if (!(scale > 0.0)) throw ContractionError("prefix has zero weight");
        env /= scale;
    }
    return normalize_probabilities(branch(row, col, upper, env, nullptr));
}

namespace {

struct BeamState {
    std::vector<int> x;
    double log_prob = 0.0;
    Eigen::VectorXd env;
};

struct Candidate {
    int parent;
    int x;
    double log_prob;
};

}  // namespace

SearchSolution branch_and_bound(const PepsNetwork& net, const IsingModel& model, const SearchParams& params) {
    if (params.max_states < 1) throw std::invalid_argument("branch_and_bound: max_states must be >= 1");
    if (!(params.cutoff >= 0.0 && params.cutoff < 1.0))
        throw std::invalid_argument("branch_and_bound: cutoff must lie in [0, 1)");
    if (net.potts.num_spins != model.num_spins()) throw DimensionError("network and model sizes differ");
    PepsContractor contractor(net, params.contraction);
    const int rows = net.rows(), cols = net.cols();
    const double log_cut = params.cutoff > 0.0 ? std::log(params.cutoff) : -std::numeric_limits<double>::infinity();
    double largest_discarded = -std::numeric_limits<double>::infinity();

    std::vector<BeamState> beam(1);
    for (int r = 0; r < rows; ++r) {
        contractor.clear_cache();
        for (auto& st : beam) st.env = contractor.start_env();
        for (int c = 0; c < cols; ++c) {
            std::vector<Candidate> cands;
            for (int i = 0; i < static_cast<int>(beam.size()); ++i) {
                const auto& st = beam[i];
                const std::span<const int> upper =
                    r > 0 ? std::span<const int>(st.x).subspan((r - 1) * cols, cols) : std::span<const int>{};
                const Eigen::VectorXd p = normalize_probabilities(contractor.branch(r, c, upper, st.env, nullptr));
                for (int x = 0; x < p.size(); ++x)
                    if (p[x] > 0.0) cands.push_back({i, x, st.log_prob + std::log(p[x])});
            }
            std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
                if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                const auto& xa = beam[a.parent].x;
                const auto& xb = beam[b.parent].x;
                if (xa != xb) return std::lexicographical_compare(xa.begin(), xa.end(), xb.begin(), xb.end());
                return a.x < b.x;
            });
            const double floor = cands.front().log_prob + log_cut;
            std::size_t keep = 0;
            while (keep < cands.size() && keep < static_cast<std::size_t>(params.max_states) &&
                   cands[keep].log_prob >= floor)
                ++keep;
            if (keep < cands.size()) largest_discarded = std::max(largest_discarded, cands[keep].log_prob);

            std::vector<BeamState> next(keep);
            for (std::size_t k = 0; k < keep; ++k) {
                const auto& cd = cands[k];
                const auto& parent = beam[cd.parent];
                const std::span<const int> upper =
                    r > 0 ? std::span<const int>(parent.x).subspan((r - 1) * cols, cols) : std::span<const int>{};
                const int u = r > 0 ? net.site(r - 1, c).down[upper[c]] : 0;
                next[k].x = parent.x;
                next[k].x.push_back(cd.x);
                next[k].log_prob = cd.log_prob;
                next[k].env = contractor.advance(r, c, u, cd.x, parent.env);
                const double scale = next[k].env.cwiseAbs().maxCoeff();
                if (scale > 0.0) next[k].env /= scale;
            }
            beam = std::move(next);
        }
    }

    SearchSolution sol;
    sol.transform = net.transform;
    sol.discarded_weight = contractor.discarded_weight();
    sol.largest_discarded_probability = std::exp(largest_discarded);
    for (auto& st : beam) {
        SolutionEntry e;
        e.spins = net.potts.decode(st.x);
        e.energy = energy(model, e.spins);
        e.log_prob = st.log_prob;
        e.potts = std::move(st.x);
        sol.entries.push_back(std::move(e));
    }
    std::sort(sol.entries.begin(), sol.entries.end(), [](const SolutionEntry& a, const SolutionEntry& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
        return lex_less(a.spins, b.spins);
    });
    for (std::size_t i = 0; i < sol.entries.size();) {
        std::size_t j = i;
        const double e = sol.entries[i].energy;
        while (j < sol.entries.size() && std::abs(sol.entries[j].energy - e) <= 1e-9 * std::max(1.0, std::abs(e))) ++j;
        for (std::size_t k = i; k < j; ++k) sol.entries[k].degeneracy = static_cast<int>(j - i);
        i = j;
    }
    if (params.droplets.enabled)
        sol.droplets = extract_droplets(sol, model, sol.entries.front().spins, params.droplets.max_energy,
                                        params.droplets.min_hamming);
    return sol;
}

std::vector<Droplet> extract_droplets(const SearchSolution& solution, const IsingModel& model,
                                      const SpinConfig& reference, double max_energy, int min_hamming) {
    check_length(model, reference);
    const double e_ref = energy(model, reference);
    std::vector<Droplet> out;
    std::vector<const SpinConfig*> accepted;
    for (const auto& entry : solution.entries) {
        const double exc = energy(model, entry.spins) - e_ref;
        if (exc > max_energy) continue;
        if (hamming(entry.spins, reference) < min_hamming) continue;
        bool far = true;
        for (const auto* other : accepted)
            if (hamming(entry.spins, *other) < min_hamming) {
                far = false;
                break;
            }
        if (!far) continue;
        Droplet d;
        d.mask.resize(reference.size());
        for (Eigen::Index i = 0; i < reference.size(); ++i) d.mask[i] = entry.spins[i] != reference[i];
        d.excitation = exc;
        d.size = hamming(entry.spins, reference);
        out.push_back(std::move(d));
        accepted.push_back(&entry.spins);
    }
    return out;
}

TransformedSolution solve_with_transforms(const IsingModel& model, const ClusterLayout& layout,
                                          const SearchParams& params, std::span<const int> transforms, int workers) {
    if (transforms.empty()) throw std::invalid_argument("solve_with_transforms: no transforms requested");
    const PottsHamiltonian potts = cluster_to_potts(model, layout);
    std::vector<SearchSolution> results(transforms.size());
    parallel_for(static_cast<int>(transforms.size()), workers, [&](int i) {
        const PepsNetwork net = build_peps(potts, params.beta, transforms[i]);
        results[i] = branch_and_bound(net, model, params);
    });
    TransformedSolution out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.per_transform.emplace_back(transforms[i], results[i].best_energy());
        if (results[i].best_energy() < results[best].best_energy()) best = i;
    }
    out.best = std::move(results[best]);
    return out;
}

}  // namespace spinbench
