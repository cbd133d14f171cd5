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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "netqalign/errors.hpp"
#include "netqalign/qpe.hpp"

namespace netqalign {

Reg2Init Reg2Init::vector(Vector v) {
    if (v.size() == 0 || !v.allFinite()) throw ValidationError("reg2 init must be a finite vector");
    if (v.isZero(0.0)) throw ValidationError("reg2 init is the zero vector");
    Reg2Init init;
    init.custom_ = std::move(v);
    return init;
}

Vector Reg2Init::resolve(Eigen::Index n) const {
    if (!custom_) return Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    if (custom_->size() != n) {
        throw ValidationError("reg2 init has length " + std::to_string(custom_->size()) +
                              ", operator dimension is " + std::to_string(n));
    }
    return custom_->normalized();
}

std::size_t qubits_for(std::size_t m) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < m) ++q;
    return q;
}

PhaseEstimationResult phase_estimate(const Matrix &a, std::size_t kappa, const Reg2Init &init,
                                     PropagatorMode mode) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ValidationError("phase_estimate: matrix must be square and nonempty");
    }
    if (kappa == 0 || kappa > kMaxKappa) {
        throw ValidationError("phase_estimate: kappa must lie in 1.." + std::to_string(kMaxKappa));
    }
    const auto n_dim = a.rows();
    const Vector start = init.resolve(n_dim);

    PhaseEstimationResult result;
    result.kappa = kappa;
    result.dimension = static_cast<std::size_t>(n_dim);
    result.system_qubits = qubits_for(result.dimension);

    QuantumState state(kappa, result.system_qubits);
    const auto padded = static_cast<Eigen::Index>(state.system_dim());
    Matrix a_padded = Matrix::Zero(padded, padded);
    a_padded.topLeftCorner(n_dim, n_dim) = a;
    const auto prop = propagator(a_padded, mode);
    result.unitarity_defect = prop.unitarity_defect;

    auto track_norm = [&] {
        result.norm_defect = std::max(result.norm_defect, std::abs(state.norm() - 1.0));
    };

    // reg1 = |0>, reg2 = init on the unpadded coordinates.
    state.amplitudes().setZero();
    state.block(0).head(n_dim) = start.cast<Complex>();
    track_norm();

    state = qft(std::move(state), QftDirection::forward);
    track_norm();

    CMatrix power = prop.matrix;
    for (std::size_t j = 0; j < kappa; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t code = 0; code < state.phase_dim(); ++code) {
            if (!(code & bit)) continue;
            const CVector slab = state.block(code);
            state.block(code) = power * slab;
        }
        track_norm();
        if (j + 1 < kappa) {
            power = power * power;
            if (mode == PropagatorMode::strict && unitarity_defect(power) > kReunitarizeThreshold) {
                power = reunitarize(power);
                ++result.reunitarizations;
            }
        }
    }

    state = qft(std::move(state), QftDirection::inverse);
    track_norm();

    result.final_norm = state.norm();
    if (result.final_norm == 0.0 || !std::isfinite(result.final_norm)) {
        throw NumericalError("phase_estimate: state norm collapsed");
    }
    state.amplitudes() /= result.final_norm;

    result.phase_distribution.resize(static_cast<Eigen::Index>(state.phase_dim()));
    for (std::size_t code = 0; code < state.phase_dim(); ++code) {
        const double p = state.block(code).squaredNorm();
        result.phase_distribution(static_cast<Eigen::Index>(code)) = p;
        if (p > kConditioningFloor) {
            CVector v = state.block(code).head(n_dim);
            const double norm = v.norm();
            if (norm > 0.0) result.conditional_vectors.emplace(code, v / norm);
        }
    }
    result.success_probability = result.phase_distribution(0);

    if (symmetry_defect(a) <= 1e-10) {
        const auto decomp = spectral_decompose(a, true);
        result.eigenvalues = decomp.eigenvalues;
        result.beta = success_probabilities(decomp, start);
    }
    return result;
}

CVector conditional_eigenvector(const PhaseEstimationResult &result, std::size_t phase_code) {
    if (phase_code >= static_cast<std::size_t>(result.phase_distribution.size())) {
        throw ValidationError("conditional_eigenvector: phase code out of range");
    }
    const auto it = result.conditional_vectors.find(phase_code);
    if (result.phase_distribution(static_cast<Eigen::Index>(phase_code)) <= kConditioningFloor ||
        it == result.conditional_vectors.end()) {
        throw ConditioningError("phase code " + std::to_string(phase_code) +
                                " has zero probability");
    }
    return it->second;
}

Vector real_from_global_phase(const CVector &v) {
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (std::abs(v(pivot)) == 0.0) return Vector::Zero(v.size());
    const Complex unwind = std::conj(v(pivot)) / std::abs(v(pivot));
    return (v * unwind).real();
}

Vector success_probabilities(const SpectralDecomposition &decomp, const Vector &input) {
    if (input.size() != decomp.eigenvectors.rows()) {
        throw ValidationError("success_probabilities: input dimension mismatch");
    }
    if (std::abs(input.norm() - 1.0) > 1e-10) {
        throw ValidationError("success_probabilities: input must have unit l2 norm");
    }
    if (decomp.orthogonality_defect() > kOrthogonalityTolerance) {
        throw ValidationError("success_probabilities: eigenvectors are not orthonormal");
    }
    return decomp.eigenvectors.transpose() * input;
}

std::size_t nearest_phase_code(double lambda, std::size_t kappa) {
    const auto codes = static_cast<long long>(std::size_t{1} << kappa);
    long long code = std::llround(lambda * static_cast<double>(codes)) % codes;
    if (code < 0) code += codes;
    return static_cast<std::size_t>(code);
}

bool phases_resolved(const Vector &eigenvalues, std::size_t kappa) {
    const double scale = static_cast<double>(std::size_t{1} << kappa);
    for (double lambda : eigenvalues) {
        const double scaled = lambda * scale;
        if (std::abs(scaled - std::round(scaled)) > 0.25) return false;
    }
    return true;
}

Vector aggregated_phase_distribution(const Vector &eigenvalues, const Vector &beta,
                                     std::size_t kappa) {
    if (eigenvalues.size() != beta.size()) throw ValidationError("eigenvalue/beta length mismatch");
    Vector out = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << kappa));
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        out(static_cast<Eigen::Index>(nearest_phase_code(eigenvalues(i), kappa))) += beta(i) * beta(i);
    }
    return out;
}

Vector predicted_phase_distribution(const Vector &eigenvalues, const Vector &beta,
                                    std::size_t kappa) {
    if (eigenvalues.size() != beta.size()) throw ValidationError("eigenvalue/beta length mismatch");
    const auto codes = std::size_t{1} << kappa;
    const double scale = static_cast<double>(codes);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(codes));
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        const double weight = beta(i) * beta(i);
        for (std::size_t m = 0; m < codes; ++m) {
            const double x = eigenvalues(i) - static_cast<double>(m) / scale;
            Complex sum = 0.0;
            for (std::size_t c = 0; c < codes; ++c) {
                sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(c) * x);
            }
            out(static_cast<Eigen::Index>(m)) += weight * std::norm(sum / scale);
        }
    }
    return out;
}

StochasticSuccessReport verify_stochastic_success(const StochasticMatrix &a) {
    StochasticSuccessReport report;
    // The identity sum_j mu_kj = 0 follows from unit column sums; row-stochastic
    // input is analyzed through its transpose.
    report.transposed = a.convention() == Convention::row;
    report.analyzed = report.transposed ? Convention::column : a.convention();
    const Matrix m = report.transposed ? Matrix(a.matrix().transpose()) : a.matrix();
    const auto eig = general_eigen(m);
    report.eigenvalues = eig.eigenvalues;
    report.component_sums = eig.eigenvectors.colwise().sum().transpose();
    report.eigenvector_condition = eig.eigenvector_condition;
    report.defective = !(eig.eigenvector_condition < kDefectiveCondition);
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        if (std::abs(eig.eigenvalues(k) - 1.0) > 1e-8) {
            report.max_violation = std::max(report.max_violation, std::abs(report.component_sums(k)));
        }
    }
    report.holds = !report.defective && report.max_violation <= 1e-8;
    return report;
}

CostEstimate cost_model(std::span<const std::size_t> network_sizes, std::size_t kappa) {
    if (network_sizes.empty()) throw ValidationError("cost_model: no networks");
    CostEstimate out;
    std::size_t largest = 0;
    for (auto m : network_sizes) {
        if (m < 2) throw ValidationError("cost_model: network sizes must be at least 2");
        out.reg2_qubits += qubits_for(m);
        largest = std::max(largest, m);
    }
    out.reg1_qubits = kappa;
    const auto k = network_sizes.size();
    out.gate_bound_dense = kappa * k * largest * largest;
    std::ostringstream note;
    note << "row-sparse factors: O(poly(m) * kappa * k) gates with kappa=" << kappa << ", k=" << k
         << ", m=" << qubits_for(largest)
         << "; per-factor evolution cost grows with the maximum degree d and ||A_j t||";
    out.gate_bound_sparse = note.str();
    return out;
}

void write_phase_distribution_csv(std::ostream &out, const PhaseEstimationResult &result) {
    out << "phase_code,probability\n";
    for (Eigen::Index c = 0; c < result.phase_distribution.size(); ++c) {
        out << c << ',' << format_double(result.phase_distribution(c)) << '\n';
    }
}

void write_conditional_vector_csv(std::ostream &out, const PhaseEstimationResult &result,
                                  std::size_t phase_code) {
    const Vector v = real_from_global_phase(conditional_eigenvector(result, phase_code));
    out << "component_index,amplitude\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << i << ',' << format_double(v(i)) << '\n';
}

}  // namespace netqalign
