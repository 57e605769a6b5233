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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace echoqem::densitysim {

using Complex = std::complex<double>;

/// Per-spin magnetizations m_i = 2 n_i - 1, one entry per qubit.
using MagnetizationVector = std::vector<double>;

inline constexpr int kMaxQubits = 12;

/// Bit of the basis index that carries `qubit`. Qubit 0 is the most
/// significant bit, so |q0 q1 ... q_{n-1}> has index sum q_k 2^(n-1-k).
constexpr std::size_t qubit_mask(int n_qubits, int qubit) noexcept {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

/// Dense 2^n x 2^n density matrix, row-major.
class DensityMatrix {
  public:
    /// |0...0><0...0|.
    explicit DensityMatrix(int n_qubits);

    static DensityMatrix basis_state(int n_qubits, std::uint64_t index);
    static DensityMatrix maximally_mixed(int n_qubits);
    /// Takes ownership of a row-major element buffer of size 4^n.
    static DensityMatrix from_elements(int n_qubits, std::vector<Complex> elements);
    /// |psi><psi| for a normalized amplitude vector of size 2^n.
    static DensityMatrix from_pure(int n_qubits, std::span<const Complex> psi);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return dim_; }

    Complex operator()(std::size_t row, std::size_t col) const {
        return elements_[row * dim_ + col];
    }
    Complex &operator()(std::size_t row, std::size_t col) {
        return elements_[row * dim_ + col];
    }

    std::span<Complex> data() noexcept { return elements_; }
    std::span<const Complex> data() const noexcept { return elements_; }

    Complex trace() const;
    /// max_{ij} |rho_ij - conj(rho_ji)|
    double hermiticity_error() const;
    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;
    double max_abs_diff(const DensityMatrix &other) const;

    friend bool operator==(const DensityMatrix &, const DensityMatrix &) = default;

  private:
    DensityMatrix(int n_qubits, std::vector<Complex> elements);

    int n_qubits_;
    std::size_t dim_;
    std::vector<Complex> elements_;
};

} // namespace echoqem::densitysim
