// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spinbench/instances.hpp"

using namespace spinbench;

namespace {

/// Pairs of distinct spins whose cells coincide or touch, by brute force over all pairs.
std::size_t expected_edges(int m, int n, int t, bool diag) {
    std::size_t count = 0;
    const int total = m * n * t;
    for (int a = 0; a < total; ++a)
        for (int b = a + 1; b < total; ++b) {
            const int ca = a / t, cb = b / t;
            const int dr = std::abs(ca / n - cb / n), dc = std::abs(ca % n - cb % n);
            if (std::max(dr, dc) > 1) continue;
            if (!diag && dr == 1 && dc == 1) continue;
            ++count;
        }
    return count;
}

}  // namespace

TEST(Lattice, SmallCases) {
    EXPECT_EQ(build_lattice({1, 1, 3, true}).size(), 3u);
    EXPECT_EQ(build_lattice({2, 2, 1, true}).size(), 6u);
    EXPECT_EQ(build_lattice({2, 2, 1, false}).size(), 4u);
}

TEST(Lattice, CountMatchesPairEnumeration) {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            for (int t = 1; t <= 3; ++t)
                for (bool diag : {true, false}) {
                    const auto edges = build_lattice({m, n, t, diag});
                    EXPECT_EQ(edges.size(), expected_edges(m, n, t, diag)) << m << "x" << n << "x" << t;
                    EXPECT_TRUE(std::is_sorted(edges.begin(), edges.end()));
                    for (const auto& [i, j] : edges) EXPECT_LT(i, j);
                }
}

TEST(Lattice, InvalidSpecThrows) { EXPECT_THROW(validate(LatticeSpec{0, 1, 1, true}), std::invalid_argument); }

TEST(Generate, RcoHasNoFieldsAndBoundedCouplings) {
    const auto m = generate(InstanceClass::RCO, LatticeSpec{3, 3, 2, true}, 7);
    EXPECT_FALSE(m.has_fields());
    for (const auto& c : m.couplings()) {
        EXPECT_GE(c.value, -1.0);
        EXPECT_LT(c.value, 1.0);
    }
}

TEST(Generate, RauSupports) {
    const auto m = generate(InstanceClass::RAU, LatticeSpec{4, 4, 2, true}, 3);
    for (int i = 0; i < m.num_spins(); ++i) {
        EXPECT_GE(m.field(i), -0.1);
        EXPECT_LT(m.field(i), 0.1);
    }
}

TEST(Generate, Deterministic) {
    const LatticeSpec spec{3, 4, 2, true};
    EXPECT_EQ(generate(InstanceClass::RAU, spec, 99), generate(InstanceClass::RAU, spec, 99));
    EXPECT_FALSE(generate(InstanceClass::RAU, spec, 99) == generate(InstanceClass::RAU, spec, 100));
}

TEST(Generate, CbfmFrequencies) {
    const int n = 1000;
    std::vector<Edge> edges;
    for (int i = 0; i < n && edges.size() < 100000; ++i)
        for (int j = i + 1; j < n && edges.size() < 100000; ++j) edges.emplace_back(i, j);
    const auto m = generate(InstanceClass::CBFM_P, n, edges, 5);
    double zero = 100000 - static_cast<double>(m.couplings().size()), minus = 0, plus = 0;
    for (const auto& c : m.couplings()) (c.value < 0 ? minus : c.value > 0 ? plus : zero) += 1;
    EXPECT_NEAR(zero / 1e5, 0.35, 0.01);
    EXPECT_NEAR(minus / 1e5, 0.10, 0.01);
    EXPECT_NEAR(plus / 1e5, 0.55, 0.01);
    int h_zero = 0, h_minus = 0;
    for (int i = 0; i < n; ++i) (m.field(i) == 0 ? h_zero : h_minus) += 1;
    EXPECT_NEAR(h_zero / 1000.0, 0.15, 0.04);
    for (int i = 0; i < n; ++i) EXPECT_LE(m.field(i), 0.0);
}

TEST(Generate, UniformityOfRco) {
    std::vector<Edge> edges;
    for (int i = 0; i < 300; ++i)
        for (int j = i + 1; j < 300; ++j) edges.emplace_back(i, j);
    const auto m = generate(InstanceClass::RCO, 300, edges, 8);
    std::vector<double> bins(10, 0.0);
    for (const auto& c : m.couplings()) bins[std::min(9, static_cast<int>((c.value + 1.0) * 5.0))] += 1.0;
    const double expect = static_cast<double>(m.couplings().size()) / 10.0;
    double chi2 = 0.0;
    for (double b : bins) chi2 += (b - expect) * (b - expect) / expect;
    // 9 degrees of freedom, 0.999 quantile.
    EXPECT_LT(chi2, 27.88);
}

TEST(Coo, FieldOnly) {
    const auto m = parse_coo("1 1 0.5\n");
    EXPECT_EQ(m.num_spins(), 1);
    EXPECT_EQ(m.field(0), 0.5);
    EXPECT_TRUE(m.couplings().empty());
}

TEST(Coo, RoundTrip) {
    const auto m = oracle::three_spin_example();
    EXPECT_EQ(parse_coo(write_coo(m)), m);
    const auto r = generate(InstanceClass::RAU, LatticeSpec{2, 3, 2, true}, 4);
    EXPECT_EQ(parse_coo(write_coo(r)), r);
    EXPECT_EQ(write_coo(parse_coo(write_coo(r))), write_coo(r));
}

TEST(Coo, CommentsBlankLinesCrlfAndReversedPairs) {
    const auto m = parse_coo("# header\r\n\r\n2 1 1.0\r\n1 3 0.5\r\n3 2 -0.75\r\n1 1 1\n2 2 -1\n3 3 1.5\n");
    EXPECT_EQ(m, oracle::three_spin_example());
}

TEST(Coo, Errors) {
    try {
        parse_coo("1 2 1.0\n2 1 0.5\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_coo("1 2 x\n"), ParseError);
    EXPECT_THROW(parse_coo("0 1 1\n"), ParseError);
    EXPECT_THROW(parse_coo("1 2\n"), ParseError);
}

TEST(Coo, HashIsStable) {
    EXPECT_EQ(content_hash(""), "cbf29ce484222325");
    EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
}

TEST(Coo, AtomicWriteAndRead) {
    const auto dir = std::filesystem::temp_directory_path() / "spinbench_coo_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "m.txt";
    write_text_atomic(path, write_coo(oracle::three_spin_example()));
    EXPECT_EQ(read_coo_file(path), oracle::three_spin_example());
    EXPECT_THROW(read_coo_file(dir / "missing.txt"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
