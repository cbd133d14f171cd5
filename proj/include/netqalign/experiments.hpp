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
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "netqalign/classical_rank.hpp"
#include "netqalign/graphs.hpp"
#include "netqalign/linalg.hpp"
#include "netqalign/qpe.hpp"

namespace netqalign {

/// X X^T / lambda_max(X X^T) with X i.i.d. uniform(0, 1).
Matrix wishart(std::size_t size, std::uint64_t seed);

struct ExperimentRecord {
    std::string experiment;
    std::size_t size = 0;
    std::size_t trial = 0;
    std::size_t kappa = 0;
    /// lambda_N - lambda_{N-1}
    double gap = 0.0;
    double beta_n_sq = 0.0;
    /// Simulated probability of phase code 0.
    double qpe_success = 0.0;
    /// |<code-0 conditional vector, mu_N>|
    double fidelity = 0.0;

    double beta_n = 0.0;
    double max_other_beta_abs = 0.0;
    /// Nearest-code aggregation of |beta_i|^2 at code 0.
    double aggregated_code0 = 0.0;
    /// Dirichlet-kernel prediction of the code-0 probability.
    double predicted_code0 = 0.0;
    bool phases_resolved = false;
};

/// Worker count from NETQALIGN_THREADS, else hardware concurrency.
std::size_t default_thread_count();

/// One record per (size, trial), sorted by (size, trial). Trial t of size N
/// uses the Wishart seed derive_seed(seed, N, t).
std::vector<ExperimentRecord> success_experiment(std::span<const std::size_t> sizes,
                                                 std::size_t trials, std::size_t kappa,
                                                 std::uint64_t seed, std::size_t threads = 0);

/// Symmetric matrix with spectrum {1, 1 - gap, 0.5, ..., 0.5} in a seeded
/// orthonormal basis. The uniform vector lies in span(mu_N, mu_{N-1}) with
/// equal weights, so leakage of mu_{N-1} into code 0 is fully visible.
struct GapInstance {
    Matrix matrix;
    Vector principal;
    Vector second;
};
GapInstance gap_instance(std::size_t size, double gap, std::uint64_t seed);

inline constexpr std::size_t kDefaultGapSize = 8;

/// One record per (gap, kappa); `trial` holds the gap's index in `gaps`.
std::vector<ExperimentRecord> gap_precision_experiment(std::span<const double> gaps,
                                                       std::span<const std::size_t> kappas,
                                                       std::uint64_t seed,
                                                       std::size_t size = kDefaultGapSize);

/// `experiment,size,trial,kappa,gap,beta_n_sq,qpe_success,fidelity`
void write_experiment_csv(std::ostream &out, const std::vector<ExperimentRecord> &records);

struct ExperimentMetadata {
    std::string experiment;
    std::vector<std::size_t> sizes;
    std::vector<double> gaps;
    std::vector<std::size_t> kappas;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// One JSON object per line.
void write_experiment_metadata(std::ostream &out, const ExperimentMetadata &meta);

// ---------------------------------------------------------------------------
// End-to-end alignment

struct AlignOptions {
    double alpha = 0.8;
    std::optional<PriorMatrix> prior;
    std::size_t kappa = kDefaultKappa;
    /// true: per-factor D^{-1/2} A D^{-1/2}, strict propagator.
    /// false: column-stochastic alpha A~ + (1 - alpha) h 1^T, idealized propagator.
    bool symmetrize = true;
    /// Operator handed to phase estimation is (1 - c) A + c I. Maps the
    /// spectrum [-1, 1] into [2c - 1, 1] so that no eigenvalue other than the
    /// principal one aliases onto phase code 0.
    double spectral_shift = 0.75;
    std::size_t top = SIZE_MAX;
    IterationOptions iteration;
};

struct AlignReport {
    double cosine = 0.0;
    /// cosine < 0.99
    bool flagged = false;
    double success_probability = 0.0;
    double unitarity_defect = 0.0;
    PropagatorMode mode = PropagatorMode::strict;
    /// Symmetrized runs score pure topology and use alpha = 1.
    double alpha_used = 1.0;
    bool classical_converged = false;
    Vector quantum_scores;
    Vector classical_scores;
    std::vector<std::string> notes;
};

struct AlignResult {
    std::vector<AlignmentPair> alignment;
    AlignReport report;
};

AlignResult align_pipeline(std::span<const Graph> graphs, const AlignOptions &options = {});

}  // namespace netqalign
