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

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netqalign/linalg.hpp"

namespace netqalign {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 1.0;
};

/// Weighted graph on nodes [0, node_count). Duplicate (src, dst) pairs are
/// merged by summing weights; undirected graphs canonicalize each edge to
/// src <= dst and store it once.
class Graph {
   public:
    Graph(std::size_t node_count, std::vector<Edge> edges, bool directed,
          std::vector<std::string> labels = {});

    std::size_t node_count() const { return node_count_; }
    const std::vector<Edge> &edges() const { return edges_; }
    bool directed() const { return directed_; }
    const std::vector<std::string> &labels() const { return labels_; }

   private:
    std::size_t node_count_;
    std::vector<Edge> edges_;
    bool directed_;
    std::vector<std::string> labels_;
};

/// Parses "src dst [weight]" lines; '#' starts a comment line.
Graph load_edge_list(std::istream &in, bool directed);
Graph load_edge_list_file(const std::string &path, bool directed);

/// Entry (i, j) is the weight of i -> j; undirected edges are mirrored.
Matrix adjacency(const Graph &g);

enum class Convention { row, column, doubly };
enum class Axis { row, column };

inline constexpr double kStochasticTolerance = 1e-10;

/// Nonnegative square matrix whose declared line sums are 1 within tolerance.
/// Construction re-divides the line sums to absorb rounding, then verifies.
class StochasticMatrix {
   public:
    StochasticMatrix(Matrix m, Convention convention, double tolerance = kStochasticTolerance);

    const Matrix &matrix() const { return matrix_; }
    Convention convention() const { return convention_; }
    double tolerance() const { return tolerance_; }
    Eigen::Index size() const { return matrix_.rows(); }

   private:
    Matrix matrix_;
    Convention convention_;
    double tolerance_;
};

/// What to do with a line that sums to zero during normalization.
class DanglingPolicy {
   public:
    static DanglingPolicy error() { return DanglingPolicy{}; }
    /// Replace the zero line with the distribution `w`.
    static DanglingPolicy redistribute(Vector w);
    /// Replace the zero line with the uniform distribution of dimension `n`.
    static DanglingPolicy uniform(Eigen::Index n);

    bool redistributes() const { return fallback_.has_value(); }
    const Vector &fallback() const { return *fallback_; }

   private:
    std::optional<Vector> fallback_;
};

/// Throws ValidationError unless v is nonnegative and sums to 1 within 1e-10.
void require_distribution(const Vector &v, const char *what);

StochasticMatrix normalize(const Matrix &m, Axis axis,
                           const DanglingPolicy &dangling = DanglingPolicy::error());

/// alpha * p_hat + (1 - alpha) * e v^T for a row-stochastic p_hat.
StochasticMatrix google_matrix(const StochasticMatrix &p_hat, double alpha, const Vector &v);

inline constexpr std::size_t kDefaultMaterializationCap = 4096;

/// Explicit Kronecker product, left factor outermost: ((i,j),(i',j')) maps to
/// row i*M2 + j, column i'*M2 + j'.
Matrix kronecker(std::span<const Matrix> factors,
                 std::size_t cap = kDefaultMaterializationCap);

/// Matrix-free A_1 (x) ... (x) A_k. Applies one factor per tensor mode, so a
/// product costs O(total_dim * sum(M_j)) and never forms the product.
class KroneckerOperator {
   public:
    explicit KroneckerOperator(std::vector<Matrix> factors);

    const std::vector<Matrix> &factors() const { return factors_; }
    std::vector<std::size_t> dims() const;
    std::size_t total_dim() const { return total_dim_; }

    Vector apply(const Vector &x) const;
    CVector apply(const CVector &x) const;
    /// Applies A_1^T (x) ... (x) A_k^T.
    Vector apply_transpose(const Vector &x) const;

    Matrix materialize(std::size_t cap = kDefaultMaterializationCap) const;

   private:
    std::vector<Matrix> factors_;
    std::size_t total_dim_;
};

Vector kron_apply(const KroneckerOperator &op, const Vector &x);
CVector kron_apply(const KroneckerOperator &op, const CVector &x);

enum class IsolatedNodePolicy { error, redistribute };

/// Column-stochastic factor A D^{-1} of an undirected graph: column u is
/// divided by the weighted degree of u. A self-loop counts once toward the
/// degree. Isolated nodes get a uniform column under `redistribute`.
Matrix isorank_factor(const Graph &g, IsolatedNodePolicy policy = IsolatedNodePolicy::error);

/// Symmetric normalization D^{-1/2} A D^{-1/2}, similar to A D^{-1}.
Matrix symmetric_factor(const Graph &g);

/// Product operator of the isorank_factor of every graph.
KroneckerOperator isorank_operator(std::span<const Graph> graphs,
                                   IsolatedNodePolicy policy = IsolatedNodePolicy::error);

/// Weighted degree (column sums of the adjacency).
Vector degrees(const Graph &g);

}  // namespace netqalign
