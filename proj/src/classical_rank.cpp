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

#include "netqalign/classical_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "netqalign/errors.hpp"

namespace netqalign {

namespace {

double vector_norm(const Vector &x, Norm norm) {
    return norm == Norm::l1 ? x.lpNorm<1>() : x.norm();
}

Vector uniform_vector(Eigen::Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

void require_options(const IterationOptions &options) {
    if (!(options.tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (options.max_iter == 0) throw ValidationError("max_iter must be at least 1");
}

Vector normalized(const Vector &x, Norm norm, const char *what) {
    if (!x.allFinite()) throw NumericalError(std::string(what) + ": non-finite iterate");
    const double n = vector_norm(x, norm);
    if (n == 0.0) throw BreakdownError(std::string(what) + ": iterate vanished");
    return x / n;
}

}  // namespace

RankResult power_iteration(const LinearOperator &apply, const Vector &x0,
                           const IterationOptions &options, Norm norm) {
    require_options(options);
    if (x0.size() == 0 || x0.isZero(0.0)) throw ValidationError("power_iteration: zero start vector");
    RankResult result;
    Vector x = normalized(x0, norm, "power_iteration");
    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        Vector y = apply(x);
        if (y.size() != x.size()) throw ValidationError("power_iteration: operator changed dimension");
        y = normalized(y, norm, "power_iteration");
        const double change = (y - x).lpNorm<1>();
        x = std::move(y);
        result.report.iterations = k;
        result.report.residual = change;
        if (change <= options.tol) {
            result.report.converged = true;
            break;
        }
    }
    result.rank = {std::move(x), norm};
    return result;
}

RankResult pagerank(const StochasticMatrix &p_tilde, const IterationOptions &options) {
    if (p_tilde.convention() == Convention::column) {
        throw ValidationError("pagerank: matrix must be row-stochastic");
    }
    const Matrix pt = p_tilde.matrix().transpose();
    auto result = power_iteration([&](const Vector &r) -> Vector { return pt * r; },
                                  uniform_vector(pt.rows()), options, Norm::l1);
    if ((p_tilde.matrix().array() <= 0.0).any()) {
        result.warnings.emplace_back(
            "matrix is not strictly positive; the stationary vector may not be unique");
    }
    return result;
}

PriorMatrix::PriorMatrix(Vector values) : values_(std::move(values)) {
    if (values_.size() == 0 || !values_.allFinite() || (values_.array() < 0.0).any()) {
        throw ValidationError("prior must be a nonempty nonnegative finite vector");
    }
    const double total = values_.sum();
    if (total <= 0.0) throw ValidationError("prior sums to zero");
    values_ /= total;
}

PriorMatrix PriorMatrix::from_matrix(const Matrix &m) {
    Vector flat(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) flat(i * m.cols() + j) = m(i, j);
    }
    return PriorMatrix(std::move(flat));
}

PriorMatrix PriorMatrix::uniform(std::size_t dim) {
    return PriorMatrix(Vector::Ones(static_cast<Eigen::Index>(dim)));
}

namespace {

void require_prior_dim(const PriorMatrix &prior, const KroneckerOperator &op) {
    if (static_cast<std::size_t>(prior.values().size()) != op.total_dim()) {
        throw ValidationError("prior has dimension " + std::to_string(prior.values().size()) +
                              ", product graph has " + std::to_string(op.total_dim()));
    }
}

}  // namespace

RankResult isorank(std::span<const Graph> graphs, double alpha,
                   const std::optional<PriorMatrix> &prior, const IterationOptions &options,
                   IsolatedNodePolicy policy) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("isorank: alpha must lie in [0, 1]");
    if (alpha < 1.0 && !prior) throw ValidationError("isorank: a prior is required when alpha < 1");
    const auto op = isorank_operator(graphs, policy);
    if (prior) require_prior_dim(*prior, op);
    const Vector start =
        prior ? prior->values() : uniform_vector(static_cast<Eigen::Index>(op.total_dim()));
    const Vector h = prior ? prior->values() : Vector();
    auto step = [&](const Vector &r) -> Vector {
        Vector next = alpha * op.apply(r);
        if (alpha < 1.0) next += (1.0 - alpha) * h;
        return next;
    };
    return power_iteration(step, start, options, Norm::l1);
}

RankVector isorank_series(std::span<const Graph> graphs, double alpha, const PriorMatrix &prior,
                          std::size_t terms, IsolatedNodePolicy policy) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ValidationError("isorank_series: alpha must lie in [0, 1)");
    }
    const auto op = isorank_operator(graphs, policy);
    require_prior_dim(prior, op);
    Vector term = prior.values();
    Vector sum = term;
    for (std::size_t k = 1; k <= terms; ++k) {
        term = alpha * op.apply(term);
        sum += term;
    }
    sum *= 1.0 - alpha;
    return {normalized(sum, Norm::l1, "isorank_series"), Norm::l1};
}

RankResult molecular_similarity(const Graph &g1, const Graph &g2, const IterationOptions &options) {
    const KroneckerOperator op({adjacency(g1), adjacency(g2)});
    return power_iteration([&](const Vector &x) -> Vector { return op.apply(x); },
                           Vector::Ones(static_cast<Eigen::Index>(op.total_dim())), options,
                           Norm::l2);
}

namespace {

void require_nonnegative_square(const Matrix &a, const char *what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ValidationError(std::string(what) + ": matrix must be square and nonempty");
    }
    require_finite(a, what);
    if ((a.array() < 0.0).any()) throw ValidationError(std::string(what) + ": negative entry");
}

}  // namespace

HitsResult hits(const Matrix &a, const IterationOptions &options) {
    require_nonnegative_square(a, "hits");
    require_options(options);
    if (a.isZero(0.0)) throw BreakdownError("hits: A^T A is identically zero");
    Vector auth = normalized(Vector::Ones(a.cols()), Norm::l2, "hits");
    Vector hub = normalized(a * auth, Norm::l2, "hits");
    HitsResult result;
    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        Vector next_auth = normalized(a.transpose() * hub, Norm::l2, "hits");
        Vector next_hub = normalized(a * next_auth, Norm::l2, "hits");
        const double change = std::max((next_auth - auth).lpNorm<1>(), (next_hub - hub).lpNorm<1>());
        auth = std::move(next_auth);
        hub = std::move(next_hub);
        result.report = {k, change, change <= options.tol};
        if (result.report.converged) break;
    }
    result.authority = {std::move(auth), Norm::l2};
    result.hub = {std::move(hub), Norm::l2};
    return result;
}

HitsResult stochastic_hits(const Matrix &a, const IterationOptions &options,
                           const DanglingPolicy &dangling) {
    require_nonnegative_square(a, "stochastic_hits");
    const Matrix w_r = normalize(a, Axis::row, dangling).matrix();
    const Matrix w_c = normalize(a, Axis::column, dangling).matrix();
    const Matrix auth_op = w_c.transpose() * w_r;
    const Matrix hub_op = w_r.transpose() * w_c;
    const Vector start = uniform_vector(a.rows());
    auto auth = power_iteration([&](const Vector &x) -> Vector { return auth_op * x; }, start,
                                options, Norm::l1);
    auto hub = power_iteration([&](const Vector &x) -> Vector { return hub_op * x; }, start,
                               options, Norm::l1);
    HitsResult result;
    result.authority = std::move(auth.rank);
    result.hub = std::move(hub.rank);
    result.report = {std::max(auth.report.iterations, hub.report.iterations),
                     std::max(auth.report.residual, hub.report.residual),
                     auth.report.converged && hub.report.converged};
    return result;
}

namespace {

Matrix frobenius_normalized(const Matrix &x) {
    if (!x.allFinite()) throw NumericalError("blondel: non-finite iterate");
    const double n = x.norm();
    if (n == 0.0) throw BreakdownError("blondel: iterate vanished");
    return x / n;
}

}  // namespace

std::vector<Matrix> blondel_trajectory(const Graph &g1, const Graph &g2, std::size_t iterations,
                                       BlondelForm form) {
    const Matrix a1 = adjacency(g1);
    const Matrix a2 = adjacency(g2);
    const Eigen::Index n1 = a1.rows();
    const Eigen::Index n2 = a2.rows();
    const KroneckerOperator op({a1, a2});
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    std::vector<Matrix> out;
    out.reserve(iterations + 1);
    out.push_back(frobenius_normalized(Matrix::Ones(n1, n2)));
    for (std::size_t k = 0; k < iterations; ++k) {
        const Matrix &x = out.back();
        Matrix next;
        if (form == BlondelForm::matrix) {
            next = a1 * x * a2.transpose() + a1.transpose() * x * a2;
        } else {
            const RowMajor rm = x;
            const Vector flat = Eigen::Map<const Vector>(rm.data(), rm.size());
            const Vector y = op.apply(flat) + op.apply_transpose(flat);
            next = Eigen::Map<const RowMajor>(y.data(), n1, n2);
        }
        out.push_back(frobenius_normalized(next));
    }
    return out;
}

Matrix blondel_similarity(const Graph &g1, const Graph &g2, std::size_t iterations,
                          BlondelForm form) {
    if (iterations % 2 != 0) {
        throw ValidationError("blondel_similarity: iteration count must be even");
    }
    return blondel_trajectory(g1, g2, iterations, form).back();
}

std::vector<std::size_t> decode_product_index(std::size_t index, std::span<const std::size_t> dims) {
    std::vector<std::size_t> tuple(dims.size());
    for (std::size_t g = dims.size(); g-- > 0;) {
        tuple[g] = index % dims[g];
        index /= dims[g];
    }
    return tuple;
}

std::size_t encode_product_index(std::span<const std::size_t> tuple,
                                 std::span<const std::size_t> dims) {
    std::size_t index = 0;
    for (std::size_t g = 0; g < dims.size(); ++g) index = index * dims[g] + tuple[g];
    return index;
}

std::vector<AlignmentPair> extract_alignment(const Vector &scores,
                                             std::span<const std::size_t> dims, std::size_t top,
                                             double tie_tolerance) {
    if (dims.empty()) throw ValidationError("extract_alignment: no graph sizes");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw ValidationError("extract_alignment: graph size must be positive");
        total *= d;
    }
    if (static_cast<std::size_t>(scores.size()) != total) {
        throw ValidationError("extract_alignment: score length " + std::to_string(scores.size()) +
                              " does not match the product of graph sizes " +
                              std::to_string(total));
    }
    if (!scores.allFinite()) throw ValidationError("extract_alignment: non-finite score");
    if (tie_tolerance < 0.0) throw ValidationError("extract_alignment: negative tie tolerance");

    const double slack = tie_tolerance * scores.cwiseAbs().maxCoeff();
    std::vector<std::vector<bool>> used;
    for (auto d : dims) used.emplace_back(d, false);
    auto available = [&](const std::vector<std::size_t> &tuple) {
        for (std::size_t g = 0; g < tuple.size(); ++g) {
            if (used[g][tuple[g]]) return false;
        }
        return true;
    };

    std::vector<AlignmentPair> pairs;
    while (pairs.size() < top) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < total; ++i) {
            if (scores(static_cast<Eigen::Index>(i)) > best && available(decode_product_index(i, dims))) {
                best = scores(static_cast<Eigen::Index>(i));
            }
        }
        if (best == -std::numeric_limits<double>::infinity()) break;
        for (std::size_t i = 0; i < total; ++i) {
            const double s = scores(static_cast<Eigen::Index>(i));
            if (s < best - slack) continue;
            auto tuple = decode_product_index(i, dims);
            if (!available(tuple)) continue;
            for (std::size_t g = 0; g < tuple.size(); ++g) used[g][tuple[g]] = true;
            pairs.push_back({std::move(tuple), s});
            break;
        }
    }
    return pairs;
}

void write_alignment_csv(std::ostream &out, const std::vector<AlignmentPair> &pairs,
                         std::size_t graph_count) {
    out << "rank,score";
    for (std::size_t g = 1; g <= graph_count; ++g) out << ",node_g" << g;
    out << '\n';
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        out << r + 1 << ',' << format_double(pairs[r].score);
        for (auto node : pairs[r].tuple) out << ',' << node;
        out << '\n';
    }
}

}  // namespace netqalign
