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
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "netqalign/graphs.hpp"
#include "netqalign/linalg.hpp"

namespace netqalign {

enum class Norm { l1, l2 };

struct RankVector {
    Vector values;
    Norm norm = Norm::l1;
};

struct IterationReport {
    std::size_t iterations = 0;
    /// l1 change of the final step.
    double residual = 0.0;
    bool converged = false;
};

struct RankResult {
    RankVector rank;
    IterationReport report;
    std::vector<std::string> warnings;
};

struct IterationOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

using LinearOperator = std::function<Vector(const Vector &)>;

/// Normalized power iteration x <- A x / |A x| until the l1 change of one
/// step is at most `tol`.
RankResult power_iteration(const LinearOperator &apply, const Vector &x0,
                           const IterationOptions &options = {}, Norm norm = Norm::l1);

/// Stationary vector of r <- P~^T r for a row-stochastic Google matrix.
RankResult pagerank(const StochasticMatrix &p_tilde, const IterationOptions &options = {});

/// Nonnegative prior over the product graph, l1-normalized on construction.
class PriorMatrix {
   public:
    explicit PriorMatrix(Vector values);
    /// Accepts an M1 x M2 matrix (flattened row-major) or an N x 1 / 1 x N vector.
    static PriorMatrix from_matrix(const Matrix &m);
    static PriorMatrix uniform(std::size_t dim);

    const Vector &values() const { return values_; }

   private:
    Vector values_;
};

/// Fixed point of R <- alpha A~ R + (1 - alpha) h with A~ = isorank_operator(graphs).
/// With no prior and alpha == 1 the start vector is uniform; a prior is
/// required whenever alpha < 1.
RankResult isorank(std::span<const Graph> graphs, double alpha,
                   const std::optional<PriorMatrix> &prior, const IterationOptions &options = {},
                   IsolatedNodePolicy policy = IsolatedNodePolicy::error);

/// (1 - alpha) * sum_{k=0}^{K} alpha^k A~^k h, l1-normalized.
RankVector isorank_series(std::span<const Graph> graphs, double alpha, const PriorMatrix &prior,
                          std::size_t terms, IsolatedNodePolicy policy = IsolatedNodePolicy::error);

/// Principal direction of A1 (x) A2 by l2-normalized power iteration.
RankResult molecular_similarity(const Graph &g1, const Graph &g2,
                                const IterationOptions &options = {});

struct HitsResult {
    RankVector authority;
    RankVector hub;
    IterationReport report;
};

/// Alternating a <- A^T h, h <- A a with l2 normalization.
HitsResult hits(const Matrix &a, const IterationOptions &options = {});

/// Authority: principal eigenvector of W_c^T W_r; hub: of W_r^T W_c.
/// W_r and W_c are the row- and column-normalized adjacency.
HitsResult stochastic_hits(const Matrix &a, const IterationOptions &options = {},
                           const DanglingPolicy &dangling = DanglingPolicy::error());

enum class BlondelForm { matrix, vector };

/// Iterates X <- A1 X A2^T + A1^T X A2 (X is |V1| x |V2|, Frobenius-normalized)
/// from the all-ones matrix. Element [k] of the result is X_k.
std::vector<Matrix> blondel_trajectory(const Graph &g1, const Graph &g2, std::size_t iterations,
                                       BlondelForm form = BlondelForm::matrix);

/// Even iterate X_iterations; entry (i, j) scores node i of g1 against node j of g2.
Matrix blondel_similarity(const Graph &g1, const Graph &g2, std::size_t iterations,
                          BlondelForm form = BlondelForm::matrix);

struct AlignmentPair {
    std::vector<std::size_t> tuple;
    double score = 0.0;
};

/// Splits a product-graph index into one node index per graph (left outermost).
std::vector<std::size_t> decode_product_index(std::size_t index, std::span<const std::size_t> dims);
std::size_t encode_product_index(std::span<const std::size_t> tuple,
                                 std::span<const std::size_t> dims);

inline constexpr double kDefaultTieTolerance = 1e-9;

/// Greedy node-disjoint matching. Each step takes the lowest product index
/// whose score is within `tie_tolerance * max|score|` of the best remaining score.
std::vector<AlignmentPair> extract_alignment(const Vector &scores,
                                             std::span<const std::size_t> dims,
                                             std::size_t top = SIZE_MAX,
                                             double tie_tolerance = kDefaultTieTolerance);

/// CSV with header `rank,score,node_g1,node_g2[,...]`; rank is 1-based.
void write_alignment_csv(std::ostream &out, const std::vector<AlignmentPair> &pairs,
                         std::size_t graph_count);

}  // namespace netqalign
