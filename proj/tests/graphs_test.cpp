// Copyright 2026 The netqalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "netqalign/graphs.hpp"

#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "netqalign/errors.hpp"
#include "oracles.hpp"

using namespace netqalign;

namespace {

Graph parse(const std::string &text, bool directed) {
    std::istringstream in(text);
    return load_edge_list(in, directed);
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto &r : rows) {
        Eigen::Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

const Graph kTriangle(3, {{0, 1}, {1, 2}, {0, 2}}, false);
const Graph kSingleEdge(2, {{0, 1}}, false);

}  // namespace

TEST(load_edge_list, directed_two_cycle) {
    auto g = parse("0 1\n1 0", true);
    EXPECT_EQ(g.node_count(), 2u);
    EXPECT_EQ(g.edges().size(), 2u);
    EXPECT_TRUE(g.directed());
}

TEST(load_edge_list, undirected_adjacency_is_symmetric) {
    auto g = parse("0 1", false);
    EXPECT_EQ(adjacency(g), mat({{0, 1}, {1, 0}}));
}

TEST(load_edge_list, comments_weights_and_duplicates) {
    auto g = parse("# header\n0 2 1.5\n\n0 2 0.5\n  # indented comment\n2 0\n", true);
    EXPECT_EQ(g.node_count(), 3u);
    ASSERT_EQ(g.edges().size(), 2u);
    EXPECT_EQ(adjacency(g)(0, 2), 2.0);
    EXPECT_EQ(adjacency(g)(2, 0), 1.0);

    auto u = parse("0 1\n1 0 2\n", false);
    ASSERT_EQ(u.edges().size(), 1u);
    EXPECT_EQ(adjacency(u)(1, 0), 3.0);
}

TEST(load_edge_list, parse_errors_carry_line_numbers) {
    try {
        parse("0 x", true);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        parse("# c\n0 1\n1 2 w\n", true);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse("-1 2", true), ParseError);
    EXPECT_THROW(parse("0 1 2 3", true), ParseError);
    EXPECT_THROW(parse("0", true), ParseError);
}

TEST(load_edge_list, validation_errors) {
    EXPECT_THROW(parse("0 1 -2", true), ValidationError);
    EXPECT_THROW(parse("", true), ValidationError);
    EXPECT_THROW(parse("# only comments\n", true), ValidationError);
    EXPECT_THROW(load_edge_list_file("/nonexistent/graph.tsv", true), ValidationError);
}

TEST(graph, rejects_out_of_range_nodes_and_bad_labels) {
    EXPECT_THROW(Graph(2, {{0, 2}}, true), ValidationError);
    EXPECT_THROW(Graph(2, {{0, 1}}, true, {"a"}), ValidationError);
    EXPECT_NO_THROW(Graph(2, {{0, 1}}, true, {"a", "b"}));
}

TEST(adjacency, examples) {
    EXPECT_EQ(adjacency(Graph(2, {{0, 1}, {1, 0}}, true)), mat({{0, 1}, {1, 0}}));
    EXPECT_EQ(adjacency(Graph(2, {{0, 1}}, true)), mat({{0, 1}, {0, 0}}));
    EXPECT_EQ(adjacency(kSingleEdge), mat({{0, 1}, {1, 0}}));
}

TEST(adjacency, undirected_is_symmetric) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto g = oracle::random_connected_graph(rng, 7, 5, t % 2 == 0);
        EXPECT_EQ(symmetry_defect(adjacency(g)), 0.0);
    }
}

TEST(normalize, already_stochastic) {
    auto s = normalize(mat({{0, 1}, {1, 0}}), Axis::row);
    EXPECT_EQ(s.matrix(), mat({{0, 1}, {1, 0}}));
    EXPECT_EQ(s.convention(), Convention::row);
}

TEST(normalize, dangling_row_redistributed) {
    Vector w(2);
    w << 0.5, 0.5;
    auto s = normalize(mat({{0, 1}, {0, 0}}), Axis::row, DanglingPolicy::redistribute(w));
    EXPECT_EQ(s.matrix(), mat({{0, 1}, {0.5, 0.5}}));
}

TEST(normalize, row_sums_divided_out) {
    EXPECT_EQ(normalize(mat({{1, 1}, {0, 2}}), Axis::row).matrix(), mat({{0.5, 0.5}, {0, 1}}));
}

TEST(normalize, column_axis) {
    auto s = normalize(mat({{1, 0}, {3, 0}}), Axis::column, DanglingPolicy::uniform(2));
    EXPECT_EQ(s.convention(), Convention::column);
    EXPECT_EQ(s.matrix(), mat({{0.25, 0.5}, {0.75, 0.5}}));
}

TEST(normalize, errors) {
    try {
        normalize(mat({{0, 1}, {0, 0}}), Axis::row);
        FAIL();
    } catch (const DegenerateInputError &e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
    }
    EXPECT_THROW(normalize(mat({{1, -1}, {0, 1}}), Axis::row), ValidationError);
    Vector bad(2);
    bad << 0.7, 0.7;
    EXPECT_THROW(DanglingPolicy::redistribute(bad), ValidationError);
    EXPECT_THROW(normalize(mat({{0, 1}, {0, 0}}), Axis::row, DanglingPolicy::uniform(3)),
                 ValidationError);
}

TEST(stochastic_matrix, construction_checks_line_sums) {
    EXPECT_THROW(StochasticMatrix(mat({{0.5, 0.4}, {0, 1}}), Convention::row), ValidationError);
    EXPECT_THROW(StochasticMatrix(mat({{0.5, 0.5}, {0, 1}}), Convention::column), ValidationError);
    EXPECT_THROW(StochasticMatrix(mat({{0.5, 0.5}, {0, 1}}), Convention::doubly), ValidationError);
    EXPECT_NO_THROW(StochasticMatrix(mat({{0.5, 0.5}, {0.5, 0.5}}), Convention::doubly));
    // Rounding-level defects are absorbed and divided out.
    auto s = StochasticMatrix(mat({{0.5 + 1e-12, 0.5}, {0, 1}}), Convention::row);
    EXPECT_NEAR(s.matrix().row(0).sum(), 1.0, 1e-15);
}

TEST(google_matrix, limits) {
    auto p = normalize(mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), Axis::row);
    Vector v = Vector::Constant(3, 1.0 / 3.0);
    EXPECT_EQ(google_matrix(p, 1.0, v).matrix(), p.matrix());

    auto p4 = normalize(Matrix::Identity(4, 4), Axis::row);
    auto g0 = google_matrix(p4, 0.0, Vector::Constant(4, 0.25));
    EXPECT_TRUE(g0.matrix().isApprox(Matrix::Constant(4, 4, 0.25), 1e-15));
}

TEST(google_matrix, identity_example) {
    auto p = normalize(Matrix::Identity(2, 2), Axis::row);
    Vector v(2);
    v << 0.5, 0.5;
    auto g = google_matrix(p, 0.85, v);
    EXPECT_NEAR(g.matrix()(0, 0), 0.925, 1e-15);
    EXPECT_NEAR(g.matrix()(0, 1), 0.075, 1e-15);
    EXPECT_NEAR(g.matrix()(1, 0), 0.075, 1e-15);
    EXPECT_NEAR(g.matrix()(1, 1), 0.925, 1e-15);
}

TEST(google_matrix, errors) {
    auto p = normalize(Matrix::Identity(2, 2), Axis::row);
    Vector v(2);
    v << 0.5, 0.5;
    EXPECT_THROW(google_matrix(p, 1.5, v), ValidationError);
    EXPECT_THROW(google_matrix(p, -0.1, v), ValidationError);
    Vector bad(2);
    bad << 0.5, 0.6;
    EXPECT_THROW(google_matrix(p, 0.5, bad), ValidationError);
    auto col = normalize(Matrix::Identity(2, 2), Axis::column);
    EXPECT_THROW(google_matrix(col, 0.5, v), ValidationError);
}

TEST(google_matrix, strictly_positive_lower_bound) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Matrix a = oracle::random_digraph(rng, 6, 0.3);
        auto p = normalize(a, Axis::row, DanglingPolicy::uniform(6));
        Vector v = oracle::random_matrix(rng, 6, 1, 0.1, 1.0);
        v /= v.sum();
        const double alpha = 0.85;
        auto g = google_matrix(p, alpha, v);
        EXPECT_GE(g.matrix().minCoeff(), (1 - alpha) * v.minCoeff() - 1e-15);
        EXPECT_GT(g.matrix().minCoeff(), 0.0);
        EXPECT_LE((g.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
    }
}

TEST(kronecker, identity_and_swap) {
    std::vector<Matrix> ii{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    EXPECT_EQ(kronecker(ii), Matrix::Identity(4, 4));

    const Matrix x = mat({{0, 1}, {1, 0}});
    std::vector<Matrix> xx{x, x};
    const Matrix k = kronecker(xx);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int ip = 0; ip < 2; ++ip) {
                for (int jp = 0; jp < 2; ++jp) {
                    const double expected = (ip == 1 - i && jp == 1 - j) ? 1.0 : 0.0;
                    EXPECT_EQ(k(i * 2 + j, ip * 2 + jp), expected);
                }
            }
        }
    }
}

TEST(kronecker, matches_entry_formula) {
    std::mt19937_64 rng(3);
    std::vector<Matrix> f{oracle::random_matrix(rng, 3, 3), oracle::random_matrix(rng, 2, 2)};
    EXPECT_LE((kronecker(f) - oracle::brute_kronecker(f)).cwiseAbs().maxCoeff(), 1e-15);
    std::vector<Matrix> g{oracle::random_matrix(rng, 2, 2), oracle::random_matrix(rng, 3, 3),
                          oracle::random_matrix(rng, 2, 2)};
    EXPECT_LE((kronecker(g) - oracle::brute_kronecker(g)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(kronecker, cap_and_shape_errors) {
    std::vector<Matrix> big{Matrix::Identity(64, 64), Matrix::Identity(65, 65)};
    EXPECT_THROW(kronecker(big), SizeError);
    EXPECT_NO_THROW(kronecker(big, 64 * 65));
    std::vector<Matrix> rect{Matrix::Ones(2, 3)};
    EXPECT_THROW(kronecker(rect), ValidationError);
    EXPECT_THROW(kronecker(std::vector<Matrix>{}), ValidationError);
}

TEST(kron_apply, examples) {
    KroneckerOperator ii({Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
    Vector x(4);
    x << 1, -2, 3.5, 4;
    EXPECT_EQ(kron_apply(ii, x), x);

    KroneckerOperator swap({mat({{0, 1}, {1, 0}})});
    Vector e0(2);
    e0 << 1, 0;
    Vector e1(2);
    e1 << 0, 1;
    EXPECT_EQ(kron_apply(swap, e0), e1);

    EXPECT_THROW(kron_apply(ii, Vector(Vector::Ones(3))), ValidationError);
}

TEST(kron_apply, matches_explicit_product_on_random_instances) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> factor_count(1, 3);
    std::uniform_int_distribution<int> factor_dim(1, 6);
    int checked = 0;
    while (checked < 60) {
        std::vector<Matrix> factors;
        std::size_t total = 1;
        const int k = factor_count(rng);
        for (int j = 0; j < k; ++j) {
            const int m = factor_dim(rng);
            factors.push_back(oracle::random_matrix(rng, m, m));
            total *= static_cast<std::size_t>(m);
        }
        if (total > 256) continue;
        KroneckerOperator op(factors);
        const Matrix dense = oracle::brute_kronecker(factors);
        const Vector x = oracle::random_matrix(rng, static_cast<Eigen::Index>(total), 1);
        EXPECT_LE((op.apply(x) - dense * x).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((op.apply_transpose(x) - dense.transpose() * x).cwiseAbs().maxCoeff(), 1e-12);
        const CVector z = x.cast<Complex>() * Complex(0.3, -1.1);
        EXPECT_LE((op.apply(z) - dense.cast<Complex>() * z).cwiseAbs().maxCoeff(), 1e-12);
        ++checked;
    }
}

TEST(isorank_operator, single_edges) {
    std::vector<Graph> gs{kSingleEdge, kSingleEdge};
    auto op = isorank_operator(gs);
    for (const auto &f : op.factors()) EXPECT_EQ(f, mat({{0, 1}, {1, 0}}));
    const Matrix k = op.materialize();
    EXPECT_LE((k.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
}

TEST(isorank_operator, triangle_factor) {
    const Matrix f = isorank_factor(kTriangle);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(f(i, j), i == j ? 0.0 : 0.5);
    }
}

TEST(isorank_operator, two_triangles_fix_uniform) {
    std::vector<Graph> gs{kTriangle, kTriangle};
    auto op = isorank_operator(gs);
    const Vector u = Vector::Constant(9, 1.0 / 9.0);
    // Oracle: multiply by the product built from the entry formula.
    const Matrix dense = oracle::brute_kronecker(op.factors());
    EXPECT_LE((dense * u - u).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((op.apply(u) - u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(isorank_operator, product_is_column_stochastic) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 15; ++t) {
        std::vector<Graph> gs{oracle::random_connected_graph(rng, 5, 3, t % 2 == 1),
                              oracle::random_connected_graph(rng, 4, 2),
                              oracle::random_connected_graph(rng, 3, 1)};
        const Matrix k = isorank_operator(gs).materialize();
        EXPECT_LE((k.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_GE(k.minCoeff(), 0.0);
    }
}

TEST(isorank_operator, isolated_nodes) {
    Graph isolated(3, {{0, 1}}, false);
    EXPECT_THROW(isorank_factor(isolated), DegenerateInputError);
    const Matrix f = isorank_factor(isolated, IsolatedNodePolicy::redistribute);
    EXPECT_LE((f.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
    EXPECT_NEAR(f(2, 2), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(isorank_factor(Graph(2, {{0, 1}}, true)), ValidationError);
}

TEST(symmetric_factor, similar_to_isorank_factor) {
    std::mt19937_64 rng(29);
    auto g = oracle::random_connected_graph(rng, 6, 4, true);
    const Matrix s = symmetric_factor(g);
    EXPECT_EQ(symmetry_defect(s), 0.0);
    const Vector d = degrees(g);
    // A D^{-1} = D^{1/2} S D^{-1/2}
    const Matrix back = d.cwiseSqrt().asDiagonal() * s * d.cwiseSqrt().cwiseInverse().asDiagonal();
    EXPECT_LE((back - isorank_factor(g)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(matrix_file, read_and_write) {
    std::istringstream in("# comment\n2 3\n1 2 3\n\n4 5 6.5\n");
    const Matrix m = read_matrix(in);
    EXPECT_EQ(m, mat({{1, 2, 3}, {4, 5, 6.5}}));
    std::ostringstream out;
    write_matrix(out, m);
    EXPECT_EQ(out.str(), "2 3\n1 2 3\n4 5 6.5\n");

    std::istringstream short_row("2 2\n1 2\n3\n");
    EXPECT_THROW(read_matrix(short_row), ParseError);
    std::istringstream bad("1 1\nabc\n");
    EXPECT_THROW(read_matrix(bad), ParseError);
    std::istringstream missing("2 2\n1 2\n");
    EXPECT_THROW(read_matrix(missing), ValidationError);
}
