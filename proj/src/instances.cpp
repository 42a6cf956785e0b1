// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbench/instances.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "spinbench/rng.hpp"

namespace spinbench {

void validate(const LatticeSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1 || spec.cell_size < 1)
        throw std::invalid_argument("lattice dimensions must be positive");
}

std::vector<Edge> build_lattice(const LatticeSpec& spec) {
    validate(spec);
    const int t = spec.cell_size;
    auto base = [&](int r, int c) { return (r * spec.cols + c) * t; };
    std::vector<Edge> edges;
    auto connect = [&](int a, int b) {
        for (int p = 0; p < t; ++p)
            for (int q = 0; q < t; ++q) edges.emplace_back(std::min(a + p, b + q), std::max(a + p, b + q));
    };
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const int b = base(r, c);
            for (int p = 0; p < t; ++p)
                for (int q = p + 1; q < t; ++q) edges.emplace_back(b + p, b + q);
            if (c + 1 < spec.cols) connect(b, base(r, c + 1));
            if (r + 1 < spec.rows) {
                connect(b, base(r + 1, c));
                if (spec.diagonal_edges) {
                    if (c + 1 < spec.cols) connect(b, base(r + 1, c + 1));
                    if (c > 0) connect(b, base(r + 1, c - 1));
                }
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

ClusterLayout lattice_layout(const LatticeSpec& spec) {
    validate(spec);
    ClusterLayout layout{spec.rows, spec.cols, std::vector<int>(spec.num_spins())};
    for (int i = 0; i < spec.num_spins(); ++i) layout.cell_of[i] = i / spec.cell_size;
    return layout;
}

InstanceClass parse_instance_class(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "rau") return InstanceClass::RAU;
    if (lower == "rco") return InstanceClass::RCO;
    if (lower == "cbfm-p" || lower == "cbfm_p" || lower == "cbfmp") return InstanceClass::CBFM_P;
    throw std::invalid_argument("unknown instance class '" + std::string(name) + "'");
}

std::string to_string(InstanceClass c) {
    switch (c) {
        case InstanceClass::RAU: return "rau";
        case InstanceClass::RCO: return "rco";
        case InstanceClass::CBFM_P: return "cbfm-p";
    }
    return "?";
}

namespace {

double draw_cbfm_coupling(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.35) return 0.0;
    if (u < 0.45) return -1.0;
    return 1.0;
}

double draw_cbfm_field(Rng& rng) {
    // P(+1) = 0; the last branch is kept so the table reads as a full distribution.
    const double u = rng.uniform();
    if (u < 0.15) return 0.0;
    if (u < 1.0) return -1.0;
    return 1.0;
}

}  // namespace

IsingModel generate(InstanceClass cls, int num_spins, std::span<const Edge> edges, std::uint64_t seed) {
    if (edges.empty()) throw std::invalid_argument("generate: empty edge list");
    std::vector<Edge> sorted(edges.begin(), edges.end());
    for (auto& e : sorted)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(sorted.begin(), sorted.end());

    Rng root(seed);
    Rng jrng = root.split(0);
    Rng hrng = root.split(1);

    std::vector<Coupling> couplings;
    couplings.reserve(sorted.size());
    for (const auto& [i, j] : sorted) {
        const double v = cls == InstanceClass::CBFM_P ? draw_cbfm_coupling(jrng) : jrng.uniform(-1.0, 1.0);
        couplings.push_back({i, j, v});
    }
    Eigen::VectorXd h = Eigen::VectorXd::Zero(num_spins);
    for (int i = 0; i < num_spins; ++i) {
        switch (cls) {
            case InstanceClass::RAU: h[i] = hrng.uniform(-0.1, 0.1); break;
            case InstanceClass::RCO: break;
            case InstanceClass::CBFM_P: h[i] = draw_cbfm_field(hrng); break;
        }
    }
    return IsingModel(num_spins, std::move(couplings), std::move(h));
}

IsingModel generate(InstanceClass cls, const LatticeSpec& spec, std::uint64_t seed) {
    const auto edges = build_lattice(spec);
    return generate(cls, spec.num_spins(), edges, seed);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t p = 0;
    while (p < s.size()) {
        while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
        if (p >= s.size()) break;
        std::size_t q = p;
        while (q < s.size() && s[q] != ' ' && s[q] != '\t') ++q;
        out.push_back(s.substr(p, q - p));
        p = q;
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line) {
    T value{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(line, "not a number: '" + std::string(tok) + "'");
    return value;
}

}  // namespace

IsingModel parse_coo(std::string_view text) {
    std::map<std::pair<int, int>, double> couplings;
    std::map<int, double> fields;
    int n = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto toks = split_ws(line);
        if (toks.size() != 3)
            throw ParseError(line_no, "expected 3 columns 'i j v', got " + std::to_string(toks.size()));
        int i = parse_number<int>(toks[0], line_no);
        int j = parse_number<int>(toks[1], line_no);
        const double v = parse_number<double>(toks[2], line_no);
        if (i < 1 || j < 1) throw ParseError(line_no, "indices are 1-based");
        n = std::max({n, i, j});
        if (i == j) {
            if (!fields.emplace(i - 1, v).second)
                throw ParseError(line_no, "duplicate field for spin " + std::to_string(i));
        } else {
            if (i > j) std::swap(i, j);
            if (!couplings.emplace(std::make_pair(i - 1, j - 1), v).second)
                throw ParseError(line_no, "duplicate coupling (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    for (const auto& [i, v] : fields) h[i] = v;
    std::vector<Coupling> list;
    list.reserve(couplings.size());
    for (const auto& [ij, v] : couplings) list.push_back({ij.first, ij.second, v});
    return IsingModel(n, std::move(list), std::move(h));
}

std::string write_coo(const IsingModel& model) {
    std::string out;
    char buf[64];
    auto row = [&](int i, int j, double v) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, j + 1, v);
        out += buf;
    };
    for (int i = 0; i < model.num_spins(); ++i) row(i, i, model.field(i));
    for (const auto& c : model.couplings()) row(c.i, c.j, c.value);
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

IsingModel read_coo_file(const std::filesystem::path& path) { return parse_coo(read_text_file(path)); }

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::system_error(errno, std::generic_category(), "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string content_hash(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace spinbench
