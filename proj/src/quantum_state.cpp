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

#include <cmath>
#include <numbers>
#include <utility>

#include "netqalign/errors.hpp"
#include "netqalign/qpe.hpp"

namespace netqalign {

QuantumState::QuantumState(std::size_t kappa, std::size_t system_qubits)
    : kappa_(kappa), system_qubits_(system_qubits) {
    if (kappa_ == 0 || kappa_ > kMaxKappa) {
        throw ValidationError("phase register must have 1.." + std::to_string(kMaxKappa) + " qubits");
    }
    if (kappa_ + system_qubits_ > 28) throw SizeError("register too large to simulate");
    amplitudes_ = CVector::Zero(static_cast<Eigen::Index>(phase_dim() * system_dim()));
    amplitudes_(0) = 1.0;
}

QuantumState::QuantumState(std::size_t kappa, std::size_t system_qubits, CVector amplitudes)
    : QuantumState(kappa, system_qubits) {
    if (amplitudes.size() != amplitudes_.size()) {
        throw ValidationError("amplitude vector has length " + std::to_string(amplitudes.size()) +
                              ", expected " + std::to_string(amplitudes_.size()));
    }
    amplitudes_ = std::move(amplitudes);
}

void QuantumState::hadamard_phase(std::size_t qubit) {
    const std::size_t mask = (std::size_t{1} << qubit) * system_dim();
    const double r = std::numbers::sqrt2 / 2.0;
    const auto total = static_cast<std::size_t>(amplitudes_.size());
    for (std::size_t i = 0; i < total; ++i) {
        if (i & mask) continue;
        const Complex a = amplitudes_(static_cast<Eigen::Index>(i));
        const Complex b = amplitudes_(static_cast<Eigen::Index>(i | mask));
        amplitudes_(static_cast<Eigen::Index>(i)) = r * (a + b);
        amplitudes_(static_cast<Eigen::Index>(i | mask)) = r * (a - b);
    }
}

void QuantumState::controlled_phase(std::size_t control, std::size_t target, double angle) {
    const std::size_t mask = ((std::size_t{1} << control) | (std::size_t{1} << target)) * system_dim();
    const Complex phase = std::polar(1.0, angle);
    const auto total = static_cast<std::size_t>(amplitudes_.size());
    for (std::size_t i = 0; i < total; ++i) {
        if ((i & mask) == mask) amplitudes_(static_cast<Eigen::Index>(i)) *= phase;
    }
}

void QuantumState::swap_phase(std::size_t a, std::size_t b) {
    if (a == b) return;
    const std::size_t ma = (std::size_t{1} << a) * system_dim();
    const std::size_t mb = (std::size_t{1} << b) * system_dim();
    const auto total = static_cast<std::size_t>(amplitudes_.size());
    for (std::size_t i = 0; i < total; ++i) {
        // Visit each (bit a = 1, bit b = 0) index once and exchange with its mirror.
        if ((i & ma) && !(i & mb)) {
            std::swap(amplitudes_(static_cast<Eigen::Index>(i)),
                      amplitudes_(static_cast<Eigen::Index>((i & ~ma) | mb)));
        }
    }
}

QuantumState qft(QuantumState state, QftDirection direction) {
    const std::size_t k = state.kappa();
    const double sign = direction == QftDirection::forward ? 1.0 : -1.0;
    // H and SWAP are real, so conjugating every phase gate yields conj(F) = F^{-1}.
    for (std::size_t q = k; q-- > 0;) {
        state.hadamard_phase(q);
        for (std::size_t r = q; r-- > 0;) {
            const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(std::size_t{1} << (q - r + 1));
            state.controlled_phase(r, q, angle);
        }
    }
    for (std::size_t q = 0; q < k / 2; ++q) state.swap_phase(q, k - 1 - q);
    return state;
}

}  // namespace netqalign
