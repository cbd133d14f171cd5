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

#include "netqalign/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "netqalign/errors.hpp"
#include "netqalign/random.hpp"

namespace netqalign {

double CounterRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix wishart(std::size_t size, std::uint64_t seed) {
    if (size < 2) throw ValidationError("wishart: size must be at least 2");
    const auto n = static_cast<Eigen::Index>(size);
    CounterRng rng(mix64(seed));
    Matrix x(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) x(i, j) = rng.uniform();
    }
    Matrix a = x * x.transpose();
    a = (0.5 * (a + a.transpose())).eval();
    const double top = spectral_decompose(a, true).eigenvalues.maxCoeff();
    return a / top;
}

std::size_t default_thread_count() {
    if (const char *env = std::getenv("NETQALIGN_THREADS")) {
        const long value = std::strtol(env, nullptr, 10);
        if (value > 0) return static_cast<std::size_t>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// claimed exactly once; results are written by index, so output order does
// not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
    threads = std::clamp<std::size_t>(threads == 0 ? default_thread_count() : threads, 1, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

double code0_fidelity(const PhaseEstimationResult &result, const Vector &principal) {
    const auto it = result.conditional_vectors.find(0);
    if (it == result.conditional_vectors.end()) return 0.0;
    return std::abs(it->second.dot(principal.cast<Complex>())) / principal.norm();
}

}  // namespace

std::vector<ExperimentRecord> success_experiment(std::span<const std::size_t> sizes,
                                                 std::size_t trials, std::size_t kappa,
                                                 std::uint64_t seed, std::size_t threads) {
    if (sizes.empty()) throw ValidationError("success_experiment: no sizes");
    for (auto s : sizes) {
        if (s < 2) throw ValidationError("success_experiment: sizes must be at least 2");
    }
    if (trials == 0) throw ValidationError("success_experiment: trials must be at least 1");
    if (kappa == 0 || kappa > kMaxKappa) throw ValidationError("success_experiment: bad kappa");

    std::vector<ExperimentRecord> records(sizes.size() * trials);
    parallel_for(records.size(), threads, [&](std::size_t idx) {
        const std::size_t size = sizes[idx / trials];
        const std::size_t trial = idx % trials;
        const Matrix a = wishart(size, derive_seed(seed, size, trial));
        const auto decomp = spectral_decompose(a, true);
        const auto n = static_cast<Eigen::Index>(size);
        const Vector uniform = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(size)));
        const Vector beta = success_probabilities(decomp, uniform);
        const auto qpe = phase_estimate(a, kappa, Reg2Init::uniform(), PropagatorMode::strict);

        ExperimentRecord &r = records[idx];
        r.experiment = "wishart";
        r.size = size;
        r.trial = trial;
        r.kappa = kappa;
        r.gap = decomp.eigenvalues(n - 1) - decomp.eigenvalues(n - 2);
        r.beta_n = std::abs(beta(n - 1));
        r.beta_n_sq = beta(n - 1) * beta(n - 1);
        r.max_other_beta_abs = beta.head(n - 1).cwiseAbs().maxCoeff();
        r.qpe_success = qpe.success_probability;
        r.fidelity = code0_fidelity(qpe, decomp.eigenvectors.col(n - 1));
        r.aggregated_code0 = aggregated_phase_distribution(decomp.eigenvalues, beta, kappa)(0);
        r.predicted_code0 = predicted_phase_distribution(decomp.eigenvalues, beta, kappa)(0);
        r.phases_resolved = phases_resolved(decomp.eigenvalues, kappa);
    });
    return records;
}

GapInstance gap_instance(std::size_t size, double gap, std::uint64_t seed) {
    if (size < 3) throw ValidationError("gap_instance: size must be at least 3");
    if (!(gap > 0.0 && gap < 1.0)) throw ValidationError("gap_instance: gap must lie in (0, 1)");
    const auto n = static_cast<Eigen::Index>(size);
    CounterRng rng(mix64(seed));
    auto gaussian = [&] {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
        return v;
    };
    // Columns filled from the principal direction down; Gram-Schmidt applied twice.
    Matrix q(n, n);
    const Vector u = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(size)));
    Vector w = gaussian();
    w -= u.dot(w) * u;
    w -= u.dot(w) * u;
    w.normalize();
    q.col(n - 1) = (u + w) / std::numbers::sqrt2;
    q.col(n - 2) = (u - w) / std::numbers::sqrt2;
    for (Eigen::Index k = n - 3; k >= 0; --k) {
        Vector v = gaussian();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = k + 1; j < n; ++j) v -= q.col(j).dot(v) * q.col(j);
        }
        q.col(k) = v.normalized();
    }
    Vector spectrum = Vector::Constant(n, 0.5);
    spectrum(n - 1) = 1.0;
    spectrum(n - 2) = 1.0 - gap;
    Matrix a = q * spectrum.asDiagonal() * q.transpose();
    a = (0.5 * (a + a.transpose())).eval();
    return {std::move(a), q.col(n - 1), q.col(n - 2)};
}

std::vector<ExperimentRecord> gap_precision_experiment(std::span<const double> gaps,
                                                       std::span<const std::size_t> kappas,
                                                       std::uint64_t seed, std::size_t size) {
    if (gaps.empty() || kappas.empty()) throw ValidationError("gap_precision: empty grid");
    for (auto k : kappas) {
        if (k == 0 || k > kMaxKappa) throw ValidationError("gap_precision: bad kappa");
    }
    std::vector<ExperimentRecord> records;
    records.reserve(gaps.size() * kappas.size());
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        const auto instance = gap_instance(size, gaps[gi], derive_seed(seed, size, gi));
        const Vector uniform = Vector::Constant(static_cast<Eigen::Index>(size),
                                                1.0 / std::sqrt(static_cast<double>(size)));
        const double beta_n = instance.principal.dot(uniform);
        for (auto kappa : kappas) {
            const auto qpe = phase_estimate(instance.matrix, kappa, Reg2Init::uniform(),
                                            PropagatorMode::strict);
            ExperimentRecord r;
            r.experiment = "gap";
            r.size = size;
            r.trial = gi;
            r.kappa = kappa;
            r.gap = gaps[gi];
            r.beta_n = std::abs(beta_n);
            r.beta_n_sq = beta_n * beta_n;
            r.qpe_success = qpe.success_probability;
            r.fidelity = code0_fidelity(qpe, instance.principal);
            r.aggregated_code0 = aggregated_phase_distribution(qpe.eigenvalues, qpe.beta, kappa)(0);
            r.predicted_code0 = predicted_phase_distribution(qpe.eigenvalues, qpe.beta, kappa)(0);
            r.phases_resolved = phases_resolved(qpe.eigenvalues, kappa);
            records.push_back(std::move(r));
        }
    }
    return records;
}

void write_experiment_csv(std::ostream &out, const std::vector<ExperimentRecord> &records) {
    out << "experiment,size,trial,kappa,gap,beta_n_sq,qpe_success,fidelity\n";
    for (const auto &r : records) {
        out << r.experiment << ',' << r.size << ',' << r.trial << ',' << r.kappa << ','
            << format_double(r.gap) << ',' << format_double(r.beta_n_sq) << ','
            << format_double(r.qpe_success) << ',' << format_double(r.fidelity) << '\n';
    }
}

void write_experiment_metadata(std::ostream &out, const ExperimentMetadata &meta) {
    nlohmann::json j;
    j["experiment"] = meta.experiment;
    j["sizes"] = meta.sizes;
    if (!meta.gaps.empty()) j["gaps"] = meta.gaps;
    j["kappas"] = meta.kappas;
    j["trials"] = meta.trials;
    j["seed"] = meta.seed;
    j["entry_distribution"] = "uniform(0,1)";
    j["generator"] = "splitmix64-counter";
    j["trial_seed"] = "derive_seed(seed, size, trial)";
    out << j.dump() << '\n';
}

// ---------------------------------------------------------------------------

namespace {

Vector kron_vectors(const std::vector<Vector> &parts) {
    Vector out = Vector::Ones(1);
    for (const auto &p : parts) {
        Vector next(out.size() * p.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * p.size(), p.size()) = out(i) * p;
        out = std::move(next);
    }
    return out;
}

Vector positive_l1(Vector v) {
    if (v.sum() < 0.0) v = -v;
    const double n = v.lpNorm<1>();
    if (n == 0.0) throw BreakdownError("align_pipeline: quantum vector vanished");
    return v / n;
}

}  // namespace

AlignResult align_pipeline(std::span<const Graph> graphs, const AlignOptions &options) {
    if (graphs.empty()) throw ValidationError("align_pipeline: no graphs");
    if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) {
        throw ValidationError("align_pipeline: alpha must lie in [0, 1]");
    }
    if (!(options.spectral_shift >= 0.0 && options.spectral_shift < 1.0)) {
        throw ValidationError("align_pipeline: spectral shift must lie in [0, 1)");
    }
    std::vector<std::size_t> dims;
    for (const auto &g : graphs) dims.push_back(g.node_count());

    AlignResult out;
    AlignReport &report = out.report;
    Matrix op;
    if (options.symmetrize) {
        std::vector<Matrix> factors;
        for (const auto &g : graphs) factors.push_back(symmetric_factor(g));
        op = kronecker(factors);
        report.mode = PropagatorMode::strict;
        report.alpha_used = 1.0;
        if (options.alpha < 1.0 || options.prior) {
            report.notes.emplace_back("symmetrized operator scores topology only; alpha and prior ignored");
        }
    } else {
        const auto iso = isorank_operator(graphs);
        op = iso.materialize();
        report.mode = PropagatorMode::idealized;
        report.alpha_used = options.alpha;
        if (options.alpha < 1.0) {
            const Vector h = options.prior ? options.prior->values()
                                           : PriorMatrix::uniform(iso.total_dim()).values();
            if (static_cast<std::size_t>(h.size()) != iso.total_dim()) {
                throw ValidationError("align_pipeline: prior dimension mismatch");
            }
            op = options.alpha * op + (1.0 - options.alpha) * h * Vector::Ones(h.size()).transpose();
        }
    }
    const auto n = op.rows();
    const double c = options.spectral_shift;
    op = (1.0 - c) * op + c * Matrix::Identity(n, n);
    if (options.symmetrize) op = (0.5 * (op + op.transpose())).eval();

    const auto qpe = phase_estimate(op, options.kappa, Reg2Init::uniform(), report.mode);
    report.success_probability = qpe.success_probability;
    report.unitarity_defect = qpe.unitarity_defect;
    Vector quantum = real_from_global_phase(conditional_eigenvector(qpe, 0));
    if (options.symmetrize) {
        // Eigenvectors of D^{-1/2} A D^{-1/2} map to those of A D^{-1} through D^{1/2}.
        std::vector<Vector> scale;
        for (const auto &g : graphs) scale.push_back(degrees(g).cwiseSqrt());
        quantum = quantum.cwiseProduct(kron_vectors(scale));
    }
    report.quantum_scores = positive_l1(std::move(quantum));

    std::optional<PriorMatrix> prior = options.prior;
    if (!options.symmetrize && options.alpha < 1.0 && !prior) {
        prior = PriorMatrix::uniform(static_cast<std::size_t>(n));
    }
    const auto classical = isorank(graphs, report.alpha_used, options.symmetrize ? std::nullopt : prior,
                                   options.iteration);
    report.classical_scores = classical.rank.values;
    report.classical_converged = classical.report.converged;

    const Vector &q = report.quantum_scores;
    const Vector &r = report.classical_scores;
    report.cosine = std::abs(q.dot(r)) / (q.norm() * r.norm());
    report.flagged = report.cosine < 0.99;
    out.alignment = extract_alignment(q, dims, options.top);
    return out;
}

}  // namespace netqalign
