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
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "netqalign/graphs.hpp"
#include "netqalign/linalg.hpp"

namespace netqalign {

// ---------------------------------------------------------------------------
// Spectra

/// Eigenvalues ascending; eigenvectors are the matching orthonormal columns.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;

    /// max_i |A mu_i - lambda_i mu_i|_2
    double residual(const Matrix &a) const;
    /// max-abs entry of V^T V - I
    double orthogonality_defect() const;
};

/// Symmetric input goes through cyclic Jacobi rotations. With `symmetric`
/// false a general eigensolver is used and a complex spectrum is rejected.
SpectralDecomposition spectral_decompose(const Matrix &a, bool symmetric = true);

struct GeneralEigen {
    CVector eigenvalues;
    /// Unit l2-norm columns.
    CMatrix eigenvectors;
    /// 2-norm condition number of the eigenvector matrix.
    double eigenvector_condition = 0.0;
};

GeneralEigen general_eigen(const Matrix &a);

// ---------------------------------------------------------------------------
// Propagator U = exp(i 2 pi A)

enum class PropagatorMode {
    /// Hermitian input only, built from the spectral decomposition.
    strict,
    /// Any square input through the matrix exponential; U may be non-unitary.
    idealized,
};

struct Propagator {
    CMatrix matrix;
    Matrix source;
    PropagatorMode mode = PropagatorMode::strict;
    double unitarity_defect = 0.0;
};

inline constexpr double kStrictUnitarityTolerance = 1e-8;
inline constexpr double kReunitarizeThreshold = 1e-10;

Propagator propagator(const Matrix &a, PropagatorMode mode = PropagatorMode::strict);

/// max-abs entry of U^H U - I.
double unitarity_defect(const CMatrix &u);

/// Nearest unitary (polar factor) by Newton-Schulz iteration; expects a
/// nearly unitary input.
CMatrix reunitarize(const CMatrix &u);

// ---------------------------------------------------------------------------
// Register state

/// Amplitudes over a kappa-qubit phase register (reg1) and an n-qubit system
/// register (reg2). Global index = phase_index * 2^n + system_index.
class QuantumState {
   public:
    QuantumState(std::size_t kappa, std::size_t system_qubits);
    QuantumState(std::size_t kappa, std::size_t system_qubits, CVector amplitudes);

    std::size_t kappa() const { return kappa_; }
    std::size_t system_qubits() const { return system_qubits_; }
    std::size_t phase_dim() const { return std::size_t{1} << kappa_; }
    std::size_t system_dim() const { return std::size_t{1} << system_qubits_; }

    const CVector &amplitudes() const { return amplitudes_; }
    CVector &amplitudes() { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

    /// Contiguous system-register slab for one phase code.
    auto block(std::size_t code) {
        return amplitudes_.segment(static_cast<Eigen::Index>(code * system_dim()),
                                   static_cast<Eigen::Index>(system_dim()));
    }
    auto block(std::size_t code) const {
        return amplitudes_.segment(static_cast<Eigen::Index>(code * system_dim()),
                                   static_cast<Eigen::Index>(system_dim()));
    }

    void hadamard_phase(std::size_t qubit);
    void controlled_phase(std::size_t control, std::size_t target, double angle);
    void swap_phase(std::size_t a, std::size_t b);

   private:
    std::size_t kappa_;
    std::size_t system_qubits_;
    CVector amplitudes_;
};

enum class QftDirection { forward, inverse };

/// Applies F[j,k] = exp(+-i 2 pi j k / 2^kappa) / sqrt(2^kappa) to the phase
/// register via Hadamard, controlled-phase and swap gates.
QuantumState qft(QuantumState state, QftDirection direction);

// ---------------------------------------------------------------------------
// Phase estimation

/// Initial system-register amplitudes: uniform over the N unpadded
/// coordinates, or a caller-supplied vector of length N.
class Reg2Init {
   public:
    static Reg2Init uniform() { return Reg2Init{}; }
    static Reg2Init vector(Vector v);

    bool is_uniform() const { return !custom_.has_value(); }
    /// Unit-norm vector of length n.
    Vector resolve(Eigen::Index n) const;

   private:
    std::optional<Vector> custom_;
};

struct PhaseEstimationResult {
    std::size_t kappa = 0;
    std::size_t system_qubits = 0;
    /// Unpadded operator dimension N.
    std::size_t dimension = 0;
    /// Probability of each phase code 0 .. 2^kappa - 1.
    Vector phase_distribution;
    /// Normalized system-register vector (first N components) for every
    /// code whose probability exceeds kConditioningFloor.
    std::map<std::size_t, CVector> conditional_vectors;
    /// Overlaps <mu_i | init> in ascending eigenvalue order; empty for
    /// non-symmetric input.
    Vector beta;
    Vector eigenvalues;
    double success_probability = 0.0;
    double unitarity_defect = 0.0;
    /// Largest |norm - 1| observed after each simulation step.
    double norm_defect = 0.0;
    /// Norm before final renormalization (differs from 1 only in idealized mode).
    double final_norm = 1.0;
    std::size_t reunitarizations = 0;
};

inline constexpr double kConditioningFloor = 1e-12;
inline constexpr std::size_t kDefaultKappa = 6;
inline constexpr std::size_t kMaxKappa = 16;

/// Simulates the phase-estimation circuit on U = exp(i 2 pi A): QFT on reg1,
/// U^{2^j} controlled by phase qubit j, inverse QFT on reg1. A is zero-padded
/// to 2^n; the initial state has no support on the padding.
PhaseEstimationResult phase_estimate(const Matrix &a, std::size_t kappa = kDefaultKappa,
                                     const Reg2Init &init = Reg2Init::uniform(),
                                     PropagatorMode mode = PropagatorMode::strict);

/// Normalized system vector conditioned on `phase_code`.
CVector conditional_eigenvector(const PhaseEstimationResult &result, std::size_t phase_code);

/// Removes the global phase (largest-magnitude component made real positive)
/// and returns the real part.
Vector real_from_global_phase(const CVector &v);

/// beta_i = <mu_i | input>.
Vector success_probabilities(const SpectralDecomposition &decomp, const Vector &input);

/// Nearest kappa-bit phase code of eigenvalue lambda (mod 1).
std::size_t nearest_phase_code(double lambda, std::size_t kappa);

/// True when every eigenvalue lies within 2^{-kappa-2} of a phase code.
bool phases_resolved(const Vector &eigenvalues, std::size_t kappa);

/// |beta_i|^2 summed by each eigenvalue's nearest phase code.
Vector aggregated_phase_distribution(const Vector &eigenvalues, const Vector &beta,
                                     std::size_t kappa);

/// Exact code distribution: sum_i |beta_i|^2 |D(lambda_i - m / 2^kappa)|^2
/// with the Dirichlet kernel D(x) = 2^-kappa sum_c exp(i 2 pi c x).
Vector predicted_phase_distribution(const Vector &eigenvalues, const Vector &beta,
                                    std::size_t kappa);

struct StochasticSuccessReport {
    /// Convention actually analyzed; row-stochastic input is transposed.
    Convention analyzed = Convention::column;
    bool transposed = false;
    CVector eigenvalues;
    /// sum_j mu_kj of each unit-norm eigenvector.
    CVector component_sums;
    /// Largest |sum_j mu_kj| over eigenpairs with |lambda - 1| > 1e-8.
    double max_violation = 0.0;
    double eigenvector_condition = 0.0;
    bool defective = false;
    /// Identity verified (false when defective: nothing is asserted).
    bool holds = false;
};

inline constexpr double kOrthogonalityTolerance = 1e-8;
inline constexpr double kDefectiveCondition = 1e10;

StochasticSuccessReport verify_stochastic_success(const StochasticMatrix &a);

// ---------------------------------------------------------------------------
// Resources

struct CostEstimate {
    std::size_t reg2_qubits = 0;
    std::size_t reg1_qubits = 0;
    /// kappa * k * max(M_j)^2, excluding the Fourier transforms.
    std::size_t gate_bound_dense = 0;
    std::string gate_bound_sparse;
};

CostEstimate cost_model(std::span<const std::size_t> network_sizes, std::size_t kappa);

/// ceil(log2(m)) for m >= 1.
std::size_t qubits_for(std::size_t m);

// ---------------------------------------------------------------------------
// Export

/// `phase_code,probability`
void write_phase_distribution_csv(std::ostream &out, const PhaseEstimationResult &result);
/// `component_index,amplitude` for the global-phase-aligned code-0 vector.
void write_conditional_vector_csv(std::ostream &out, const PhaseEstimationResult &result,
                                  std::size_t phase_code = 0);

}  // namespace netqalign
