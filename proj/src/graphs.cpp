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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "netqalign/errors.hpp"

namespace netqalign {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges, bool directed,
             std::vector<std::string> labels)
    : node_count_(node_count), directed_(directed), labels_(std::move(labels)) {
    if (node_count_ == 0) throw ValidationError("graph must have at least one node");
    if (!labels_.empty() && labels_.size() != node_count_) {
        throw ValidationError("label count " + std::to_string(labels_.size()) +
                              " does not match node count " + std::to_string(node_count_));
    }
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto &e : edges) {
        if (e.src >= node_count_ || e.dst >= node_count_) {
            throw ValidationError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                                  ") references a node outside [0, " +
                                  std::to_string(node_count_) + ")");
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw ValidationError("edge weight must be finite and nonnegative");
        }
        const auto key = directed_ ? std::make_pair(e.src, e.dst)
                                   : std::make_pair(std::min(e.src, e.dst), std::max(e.src, e.dst));
        merged[key] += e.weight;
    }
    edges_.reserve(merged.size());
    for (const auto &[key, w] : merged) edges_.push_back({key.first, key.second, w});
}

namespace {

bool parse_index(const std::string &token, std::size_t &out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace

Graph load_edge_list(std::istream &in, bool directed) {
    std::vector<Edge> edges;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream tokens(line);
        std::string src_tok, dst_tok, weight_tok, extra;
        tokens >> src_tok >> dst_tok;
        Edge e;
        if (!parse_index(src_tok, e.src)) {
            throw ParseError(line_no, "malformed source node '" + src_tok + "'");
        }
        if (!parse_index(dst_tok, e.dst)) {
            throw ParseError(line_no, "malformed target node '" + dst_tok + "'");
        }
        if (tokens >> weight_tok) {
            auto [ptr, ec] = std::from_chars(weight_tok.data(),
                                             weight_tok.data() + weight_tok.size(), e.weight);
            if (ec != std::errc{} || ptr != weight_tok.data() + weight_tok.size() ||
                !std::isfinite(e.weight)) {
                throw ParseError(line_no, "malformed weight '" + weight_tok + "'");
            }
            if (e.weight < 0.0) {
                throw ValidationError("line " + std::to_string(line_no) + ": negative weight");
            }
        }
        if (tokens >> extra) throw ParseError(line_no, "unexpected token '" + extra + "'");
        max_index = std::max({max_index, e.src, e.dst});
        edges.push_back(e);
    }
    if (edges.empty()) throw ValidationError("edge list contains no edges");
    return Graph(max_index + 1, std::move(edges), directed);
}

Graph load_edge_list_file(const std::string &path, bool directed) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return load_edge_list(in, directed);
}

Matrix adjacency(const Graph &g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Matrix a = Matrix::Zero(n, n);
    for (const auto &e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.src);
        const auto j = static_cast<Eigen::Index>(e.dst);
        a(i, j) += e.weight;
        if (!g.directed() && i != j) a(j, i) += e.weight;
    }
    return a;
}

Vector degrees(const Graph &g) { return adjacency(g).colwise().sum().transpose(); }

// ---------------------------------------------------------------------------
// Stochastic matrices

namespace {

void check_lines(const Matrix &m, bool rows, double tol) {
    const Vector sums = rows ? Vector(m.rowwise().sum()) : Vector(m.colwise().sum().transpose());
    for (Eigen::Index i = 0; i < sums.size(); ++i) {
        if (std::abs(sums(i) - 1.0) > tol) {
            throw ValidationError(std::string(rows ? "row " : "column ") + std::to_string(i) +
                                  " sums to " + format_double(sums(i)) + ", not 1");
        }
    }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix m, Convention convention, double tolerance)
    : matrix_(std::move(m)), convention_(convention), tolerance_(tolerance) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw ValidationError("stochastic matrix must be square and nonempty");
    }
    require_finite(matrix_, "stochastic matrix");
    if ((matrix_.array() < 0.0).any()) {
        throw ValidationError("stochastic matrix has a negative entry");
    }
    switch (convention_) {
        case Convention::row:
            check_lines(matrix_, true, tolerance_);
            {
                const Eigen::ArrayXd sums = matrix_.rowwise().sum().array();
                matrix_.array().colwise() /= sums;
            }
            break;
        case Convention::column:
            check_lines(matrix_, false, tolerance_);
            {
                const Eigen::Array<double, 1, Eigen::Dynamic> sums = matrix_.colwise().sum().array();
                matrix_.array().rowwise() /= sums;
            }
            break;
        case Convention::doubly:
            check_lines(matrix_, true, tolerance_);
            check_lines(matrix_, false, tolerance_);
            break;
    }
}

DanglingPolicy DanglingPolicy::redistribute(Vector w) {
    require_distribution(w, "dangling redistribution vector");
    DanglingPolicy p;
    p.fallback_ = std::move(w);
    return p;
}

DanglingPolicy DanglingPolicy::uniform(Eigen::Index n) {
    return redistribute(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

void require_distribution(const Vector &v, const char *what) {
    if (v.size() == 0 || !v.allFinite() || (v.array() < 0.0).any() ||
        std::abs(v.sum() - 1.0) > kStochasticTolerance) {
        throw ValidationError(std::string(what) + " must be a probability vector");
    }
}

StochasticMatrix normalize(const Matrix &m, Axis axis, const DanglingPolicy &dangling) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError("normalize: matrix must be square and nonempty");
    }
    require_finite(m, "normalize");
    if ((m.array() < 0.0).any()) throw ValidationError("normalize: negative entry");
    if (dangling.redistributes() && dangling.fallback().size() != m.rows()) {
        throw ValidationError("normalize: redistribution vector has the wrong dimension");
    }
    const bool by_row = axis == Axis::row;
    Matrix out = m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double sum = by_row ? m.row(i).sum() : m.col(i).sum();
        if (sum > 0.0) {
            if (by_row) {
                out.row(i) /= sum;
            } else {
                out.col(i) /= sum;
            }
            continue;
        }
        if (!dangling.redistributes()) {
            throw DegenerateInputError(std::string(by_row ? "row " : "column ") +
                                       std::to_string(i) + " sums to zero");
        }
        if (by_row) {
            out.row(i) = dangling.fallback().transpose();
        } else {
            out.col(i) = dangling.fallback();
        }
    }
    return StochasticMatrix(std::move(out), by_row ? Convention::row : Convention::column);
}

StochasticMatrix google_matrix(const StochasticMatrix &p_hat, double alpha, const Vector &v) {
    if (p_hat.convention() == Convention::column) {
        throw ValidationError("google_matrix: p_hat must be row-stochastic");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValidationError("google_matrix: alpha must lie in [0, 1]");
    }
    require_distribution(v, "personalization vector");
    if (v.size() != p_hat.size()) {
        throw ValidationError("google_matrix: personalization vector has the wrong dimension");
    }
    Matrix g = alpha * p_hat.matrix();
    g.rowwise() += (1.0 - alpha) * v.transpose();
    return StochasticMatrix(std::move(g), Convention::row);
}

// ---------------------------------------------------------------------------
// Kronecker products

namespace {

std::size_t checked_product_dim(std::span<const Matrix> factors) {
    if (factors.empty()) throw ValidationError("Kronecker product needs at least one factor");
    std::size_t dim = 1;
    for (const auto &f : factors) {
        if (f.rows() != f.cols() || f.rows() == 0) {
            throw ValidationError("Kronecker factors must be square and nonempty");
        }
        dim *= static_cast<std::size_t>(f.rows());
    }
    return dim;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply_factors(const std::vector<Matrix> &factors,
                                                       std::size_t total,
                                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &x,
                                                       bool transpose) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (static_cast<std::size_t>(x.size()) != total) {
        throw ValidationError("kron_apply: vector length " + std::to_string(x.size()) +
                              " does not match operator dimension " + std::to_string(total));
    }
    Vec cur = x;
    Vec next(cur.size());
    Eigen::Index outer = 1;
    Eigen::Index inner = static_cast<Eigen::Index>(total);
    for (const auto &f : factors) {
        const Eigen::Index m = f.rows();
        inner /= m;
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = f.cast<Scalar>();
        if (transpose) a.transposeInPlace();
        // Each outer block is an (m x inner) row-major slab acted on by the factor.
        for (Eigen::Index o = 0; o < outer; ++o) {
            Eigen::Map<const Block> src(cur.data() + o * m * inner, m, inner);
            Eigen::Map<Block> dst(next.data() + o * m * inner, m, inner);
            dst.noalias() = a * src;
        }
        outer *= m;
        cur.swap(next);
    }
    return cur;
}

}  // namespace

Matrix kronecker(std::span<const Matrix> factors, std::size_t cap) {
    const auto dim = checked_product_dim(factors);
    if (dim > cap) {
        throw SizeError("explicit Kronecker product of dimension " + std::to_string(dim) +
                        " exceeds the cap of " + std::to_string(cap) +
                        "; use KroneckerOperator for matrix-free application");
    }
    Matrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        const Matrix &b = factors[k];
        Matrix next(out.rows() * b.rows(), out.cols() * b.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = out(i, j) * b;
            }
        }
        out = std::move(next);
    }
    return out;
}

KroneckerOperator::KroneckerOperator(std::vector<Matrix> factors)
    : factors_(std::move(factors)), total_dim_(checked_product_dim(factors_)) {
    for (const auto &f : factors_) require_finite(f, "Kronecker factor");
}

std::vector<std::size_t> KroneckerOperator::dims() const {
    std::vector<std::size_t> out;
    out.reserve(factors_.size());
    for (const auto &f : factors_) out.push_back(static_cast<std::size_t>(f.rows()));
    return out;
}

Vector KroneckerOperator::apply(const Vector &x) const {
    return apply_factors<double>(factors_, total_dim_, x, false);
}

CVector KroneckerOperator::apply(const CVector &x) const {
    return apply_factors<Complex>(factors_, total_dim_, x, false);
}

Vector KroneckerOperator::apply_transpose(const Vector &x) const {
    return apply_factors<double>(factors_, total_dim_, x, true);
}

Matrix KroneckerOperator::materialize(std::size_t cap) const { return kronecker(factors_, cap); }

Vector kron_apply(const KroneckerOperator &op, const Vector &x) { return op.apply(x); }
CVector kron_apply(const KroneckerOperator &op, const CVector &x) { return op.apply(x); }

// ---------------------------------------------------------------------------
// IsoRank factors

namespace {

void require_undirected(const Graph &g, const char *what) {
    if (g.directed()) throw ValidationError(std::string(what) + ": graph must be undirected");
}

}  // namespace

Matrix isorank_factor(const Graph &g, IsolatedNodePolicy policy) {
    require_undirected(g, "isorank_factor");
    Matrix a = adjacency(g);
    const auto n = a.rows();
    for (Eigen::Index u = 0; u < n; ++u) {
        const double deg = a.col(u).sum();
        if (deg > 0.0) {
            a.col(u) /= deg;
        } else if (policy == IsolatedNodePolicy::redistribute) {
            a.col(u).setConstant(1.0 / static_cast<double>(n));
        } else {
            throw DegenerateInputError("node " + std::to_string(u) + " is isolated");
        }
    }
    return StochasticMatrix(std::move(a), Convention::column).matrix();
}

Matrix symmetric_factor(const Graph &g) {
    require_undirected(g, "symmetric_factor");
    const Matrix a = adjacency(g);
    const Vector deg = a.colwise().sum().transpose();
    for (Eigen::Index u = 0; u < deg.size(); ++u) {
        if (deg(u) <= 0.0) throw DegenerateInputError("node " + std::to_string(u) + " is isolated");
    }
    const Vector inv_sqrt = deg.array().rsqrt();
    Matrix s = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
    // Restore exact symmetry lost to rounding.
    return 0.5 * (s + s.transpose());
}

KroneckerOperator isorank_operator(std::span<const Graph> graphs, IsolatedNodePolicy policy) {
    if (graphs.empty()) throw ValidationError("isorank_operator: no graphs");
    std::vector<Matrix> factors;
    factors.reserve(graphs.size());
    for (const auto &g : graphs) factors.push_back(isorank_factor(g, policy));
    return KroneckerOperator(std::move(factors));
}

}  // namespace netqalign
