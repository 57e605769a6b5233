// Copyright 2026 The echoqem Authors
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

#include "echoqem/densitysim/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "echoqem/errors.hpp"

namespace echoqem::densitysim {

namespace {

std::size_t checked_dim(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw InvalidParameter("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                               "], got " + std::to_string(n_qubits));
    }
    return std::size_t{1} << n_qubits;
}

} // namespace

DensityMatrix::DensityMatrix(int n_qubits) : DensityMatrix(basis_state(n_qubits, 0)) {}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<Complex> elements)
    : n_qubits_(n_qubits), dim_(checked_dim(n_qubits)), elements_(std::move(elements)) {
    if (elements_.size() != dim_ * dim_) {
        throw ShapeError("density matrix of " + std::to_string(n_qubits) + " qubits needs " +
                         std::to_string(dim_ * dim_) + " elements, got " +
                         std::to_string(elements_.size()));
    }
}

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::uint64_t index) {
    const std::size_t dim = checked_dim(n_qubits);
    if (index >= dim) {
        throw InvalidParameter("basis index " + std::to_string(index) + " out of range");
    }
    std::vector<Complex> elements(dim * dim);
    elements[index * dim + index] = 1.0;
    return DensityMatrix(n_qubits, std::move(elements));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const std::size_t dim = checked_dim(n_qubits);
    std::vector<Complex> elements(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        elements[i * dim + i] = 1.0 / static_cast<double>(dim);
    }
    return DensityMatrix(n_qubits, std::move(elements));
}

DensityMatrix DensityMatrix::from_elements(int n_qubits, std::vector<Complex> elements) {
    return DensityMatrix(n_qubits, std::move(elements));
}

DensityMatrix DensityMatrix::from_pure(int n_qubits, std::span<const Complex> psi) {
    const std::size_t dim = checked_dim(n_qubits);
    if (psi.size() != dim) {
        throw ShapeError("state vector size does not match register");
    }
    std::vector<Complex> elements(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            elements[r * dim + c] = psi[r] * std::conj(psi[c]);
        }
    }
    return DensityMatrix(n_qubits, std::move(elements));
}

Complex DensityMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += elements_[i * dim_ + i];
    }
    return t;
}

double DensityMatrix::hermiticity_error() const {
    double err = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            err = std::max(err, std::abs(elements_[r * dim_ + c] -
                                         std::conj(elements_[c * dim_ + r])));
        }
    }
    return err;
}

double DensityMatrix::min_eigenvalue() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = elements_[static_cast<std::size_t>(r) * dim_ + static_cast<std::size_t>(c)];
        }
    }
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrix::max_abs_diff(const DensityMatrix &other) const {
    if (other.dim_ != dim_) {
        throw ShapeError("density matrix dimensions differ");
    }
    double err = 0.0;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        err = std::max(err, std::abs(elements_[i] - other.elements_[i]));
    }
    return err;
}

} // namespace echoqem::densitysim
