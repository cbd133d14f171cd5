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
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "netqalign/errors.hpp"
#include "netqalign/qpe.hpp"

namespace netqalign {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr int kMaxJacobiSweeps = 64;

double off_diagonal_norm(const Matrix &a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) sum += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(sum);
}

// Cyclic Jacobi: sweep all (p, q) pairs, zeroing a_pq with a plane rotation,
// until the off-diagonal mass is negligible against ||A||_F.
SpectralDecomposition jacobi_eigen(Matrix a) {
    const Eigen::Index n = a.rows();
    Matrix v = Matrix::Identity(n, n);
    const double scale = a.norm();
    const double target = 1e-15 * scale;
    int sweep = 0;
    for (; sweep < kMaxJacobiSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Once a_pq is below the precision of both diagonal entries it is dropped.
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == kMaxJacobiSweeps && off_diagonal_norm(a) > target) {
        throw NumericalError("Jacobi eigensolver did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = a(src, src);
        out.eigenvectors.col(k) = v.col(src);
    }
    return out;
}

void require_square(const Matrix &a, const char *what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ValidationError(std::string(what) + ": matrix must be square and nonempty");
    }
    require_finite(a, what);
}

}  // namespace

double SpectralDecomposition::residual(const Matrix &a) const {
    const Matrix r = a * eigenvectors - eigenvectors * eigenvalues.asDiagonal();
    return r.colwise().norm().maxCoeff();
}

double SpectralDecomposition::orthogonality_defect() const {
    const auto n = eigenvectors.cols();
    return (eigenvectors.transpose() * eigenvectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

SpectralDecomposition spectral_decompose(const Matrix &a, bool symmetric) {
    require_square(a, "spectral_decompose");
    if (symmetric) {
        if (symmetry_defect(a) > kSymmetryTolerance) {
            throw ValidationError("spectral_decompose: matrix is not symmetric");
        }
        return jacobi_eigen(0.5 * (a + a.transpose()));
    }
    const auto general = general_eigen(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (general.eigenvalues.imag().cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw NumericalError("spectral_decompose: spectrum is not real");
    }
    const auto n = a.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return general.eigenvalues(x).real() < general.eigenvalues(y).real();
    });
    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = general.eigenvalues(src).real();
        out.eigenvectors.col(k) = real_from_global_phase(general.eigenvectors.col(src));
        out.eigenvectors.col(k).normalize();
    }
    return out;
}

GeneralEigen general_eigen(const Matrix &a) {
    require_square(a, "general_eigen");
    Eigen::EigenSolver<Matrix> solver(a, true);
    if (solver.info() != Eigen::Success) throw NumericalError("general eigensolver failed");
    GeneralEigen out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.eigenvectors.colwise().normalize();
    Eigen::JacobiSVD<CMatrix> svd(out.eigenvectors);
    const auto &sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    out.eigenvector_condition = smallest > 0.0 ? sv(0) / smallest : INFINITY;
    return out;
}

double unitarity_defect(const CMatrix &u) {
    const auto n = u.rows();
    return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

CMatrix reunitarize(const CMatrix &u) {
    const auto n = u.rows();
    CMatrix x = u;
    for (int k = 0; k < 50; ++k) {
        const CMatrix gram = x.adjoint() * x;
        if ((gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-15) break;
        x = 0.5 * x * (3.0 * CMatrix::Identity(n, n) - gram);
    }
    return x;
}

Propagator propagator(const Matrix &a, PropagatorMode mode) {
    require_square(a, "propagator");
    Propagator out;
    out.source = a;
    out.mode = mode;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (mode == PropagatorMode::strict) {
        if (symmetry_defect(a) > kSymmetryTolerance) {
            throw ValidationError(
                "propagator: strict mode requires a symmetric matrix; use idealized mode");
        }
        const auto decomp = spectral_decompose(a, true);
        const CVector phases = (Complex(0.0, two_pi) * decomp.eigenvalues.cast<Complex>()).array().exp();
        const CMatrix v = decomp.eigenvectors.cast<Complex>();
        out.matrix = v * phases.asDiagonal() * v.transpose();
    } else {
        const CMatrix generator = Complex(0.0, two_pi) * a.cast<Complex>();
        out.matrix = generator.exp();
    }
    if (!out.matrix.allFinite()) throw NumericalError("propagator: non-finite entries");
    out.unitarity_defect = unitarity_defect(out.matrix);
    if (mode == PropagatorMode::strict && out.unitarity_defect > kStrictUnitarityTolerance) {
        throw NumericalError("propagator: unitarity defect " + format_double(out.unitarity_defect) +
                             " exceeds strict tolerance");
    }
    return out;
}

}  // namespace netqalign
