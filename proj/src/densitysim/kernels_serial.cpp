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

// Reference kernels. Written for obviousness: a unitary is applied as a left
// multiplication followed by a right multiplication by its adjoint, and
// every loop walks the full index range and skips what it does not touch.

#include <utility>

#include "echoqem/densitysim/kernels.hpp"

namespace echoqem::densitysim::kernels::serial {

void apply_1q(std::span<Complex> rho, int n_qubits, int qubit, const Mat2 &u) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t m = qubit_mask(n_qubits, qubit);

    // rho <- U rho
    for (std::size_t r = 0; r < dim; ++r) {
        if (r & m) continue;
        const std::size_t r1 = r | m;
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex a = rho[r * dim + c];
            const Complex b = rho[r1 * dim + c];
            rho[r * dim + c] = u[0] * a + u[1] * b;
            rho[r1 * dim + c] = u[2] * a + u[3] * b;
        }
    }

    // rho <- rho U^dagger
    const Complex v0 = std::conj(u[0]);
    const Complex v1 = std::conj(u[1]);
    const Complex v2 = std::conj(u[2]);
    const Complex v3 = std::conj(u[3]);
    for (std::size_t r = 0; r < dim; ++r) {
        Complex *row = rho.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & m) continue;
            const Complex a = row[c];
            const Complex b = row[c | m];
            row[c] = a * v0 + b * v1;
            row[c | m] = a * v2 + b * v3;
        }
    }
}

void apply_cnot(std::span<Complex> rho, int n_qubits, int control, int target) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t cm = qubit_mask(n_qubits, control);
    const std::size_t tm = qubit_mask(n_qubits, target);

    for (std::size_t r = 0; r < dim; ++r) {
        if (!(r & cm) || (r & tm)) continue;
        for (std::size_t c = 0; c < dim; ++c) {
            std::swap(rho[r * dim + c], rho[(r | tm) * dim + c]);
        }
    }
    for (std::size_t r = 0; r < dim; ++r) {
        Complex *row = rho.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            if (!(c & cm) || (c & tm)) continue;
            std::swap(row[c], row[c | tm]);
        }
    }
}

void depolarize_1q(std::span<Complex> rho, int n_qubits, int qubit, double p) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t m = qubit_mask(n_qubits, qubit);
    const double keep = 1.0 - p;

    for (std::size_t r = 0; r < dim; ++r) {
        if (r & m) continue;
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & m) continue;
            Complex &e00 = rho[r * dim + c];
            Complex &e01 = rho[r * dim + (c | m)];
            Complex &e10 = rho[(r | m) * dim + c];
            Complex &e11 = rho[(r | m) * dim + (c | m)];
            const Complex mixed = 0.5 * p * (e00 + e11);
            e00 = keep * e00 + mixed;
            e11 = keep * e11 + mixed;
            e01 *= keep;
            e10 *= keep;
        }
    }
}

void depolarize_2q(std::span<Complex> rho, int n_qubits, int qubit_a, int qubit_b,
                   double p) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t ma = qubit_mask(n_qubits, qubit_a);
    const std::size_t mb = qubit_mask(n_qubits, qubit_b);
    const std::size_t both = ma | mb;
    const std::size_t offset[4] = {0, mb, ma, ma | mb};
    const double keep = 1.0 - p;

    for (std::size_t r = 0; r < dim; ++r) {
        if (r & both) continue;
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & both) continue;
            Complex diag_sum = 0.0;
            for (int s = 0; s < 4; ++s) {
                diag_sum += rho[(r | offset[s]) * dim + (c | offset[s])];
            }
            const Complex mixed = 0.25 * p * diag_sum;
            for (int s = 0; s < 4; ++s) {
                for (int t = 0; t < 4; ++t) {
                    Complex &e = rho[(r | offset[s]) * dim + (c | offset[t])];
                    e = s == t ? keep * e + mixed : keep * e;
                }
            }
        }
    }
}

} // namespace echoqem::densitysim::kernels::serial
