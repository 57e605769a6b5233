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

// OpenMP kernels. Loops enumerate only the touched index pairs/quads (a zero
// bit is inserted at each target position), and a single-qubit unitary is
// applied to each 2x2 block in one pass. Iterations of the outer loop touch
// disjoint rows, so no synchronization is needed.

#include <cstdint>
#include <utility>

#include "echoqem/densitysim/kernels.hpp"

namespace echoqem::densitysim::kernels::parallel {

namespace {

inline std::size_t insert_zero_bit(std::size_t k, std::size_t mask) {
    const std::size_t low = k & (mask - 1);
    return ((k & ~(mask - 1)) << 1) | low;
}

inline std::size_t insert_zero_bits(std::size_t k, std::size_t m1, std::size_t m2) {
    const std::size_t lo = m1 < m2 ? m1 : m2;
    const std::size_t hi = m1 < m2 ? m2 : m1;
    return insert_zero_bit(insert_zero_bit(k, lo), hi);
}

} // namespace

void apply_1q(std::span<Complex> rho, int n_qubits, int qubit, const Mat2 &u) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    const std::int64_t half = dim / 2;
    const std::size_t m = qubit_mask(n_qubits, qubit);
    const Complex v0 = std::conj(u[0]);
    const Complex v1 = std::conj(u[1]);
    const Complex v2 = std::conj(u[2]);
    const Complex v3 = std::conj(u[3]);
    Complex *data = rho.data();

#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (std::int64_t i = 0; i < half; ++i) {
        const std::size_t r0 = insert_zero_bit(static_cast<std::size_t>(i), m);
        Complex *row0 = data + r0 * static_cast<std::size_t>(dim);
        Complex *row1 = data + (r0 | m) * static_cast<std::size_t>(dim);
        for (std::int64_t j = 0; j < half; ++j) {
            const std::size_t c0 = insert_zero_bit(static_cast<std::size_t>(j), m);
            const std::size_t c1 = c0 | m;
            const Complex a = row0[c0], b = row0[c1], c = row1[c0], d = row1[c1];
            const Complex t00 = u[0] * a + u[1] * c;
            const Complex t01 = u[0] * b + u[1] * d;
            const Complex t10 = u[2] * a + u[3] * c;
            const Complex t11 = u[2] * b + u[3] * d;
            row0[c0] = t00 * v0 + t01 * v1;
            row0[c1] = t00 * v2 + t01 * v3;
            row1[c0] = t10 * v0 + t11 * v1;
            row1[c1] = t10 * v2 + t11 * v3;
        }
    }
}

void apply_cnot(std::span<Complex> rho, int n_qubits, int control, int target) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    const std::size_t udim = static_cast<std::size_t>(dim);
    const std::size_t cm = qubit_mask(n_qubits, control);
    const std::size_t tm = qubit_mask(n_qubits, target);
    const std::int64_t quarter = dim / 4;
    Complex *data = rho.data();

    // Rows with control=1: swap target=0 and target=1 rows.
#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (std::int64_t i = 0; i < quarter; ++i) {
        const std::size_t r = insert_zero_bits(static_cast<std::size_t>(i), cm, tm) | cm;
        Complex *row0 = data + r * udim;
        Complex *row1 = data + (r | tm) * udim;
        for (std::size_t c = 0; c < udim; ++c) {
            std::swap(row0[c], row1[c]);
        }
    }

#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (std::int64_t r = 0; r < dim; ++r) {
        Complex *row = data + static_cast<std::size_t>(r) * udim;
        for (std::int64_t j = 0; j < quarter; ++j) {
            const std::size_t c = insert_zero_bits(static_cast<std::size_t>(j), cm, tm) | cm;
            std::swap(row[c], row[c | tm]);
        }
    }
}

void depolarize_1q(std::span<Complex> rho, int n_qubits, int qubit, double p) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    const std::size_t udim = static_cast<std::size_t>(dim);
    const std::int64_t half = dim / 2;
    const std::size_t m = qubit_mask(n_qubits, qubit);
    const double keep = 1.0 - p;
    Complex *data = rho.data();

#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (std::int64_t i = 0; i < half; ++i) {
        const std::size_t r0 = insert_zero_bit(static_cast<std::size_t>(i), m);
        Complex *row0 = data + r0 * udim;
        Complex *row1 = data + (r0 | m) * udim;
        for (std::int64_t j = 0; j < half; ++j) {
            const std::size_t c0 = insert_zero_bit(static_cast<std::size_t>(j), m);
            const std::size_t c1 = c0 | m;
            const Complex mixed = 0.5 * p * (row0[c0] + row1[c1]);
            row0[c0] = keep * row0[c0] + mixed;
            row1[c1] = keep * row1[c1] + mixed;
            row0[c1] *= keep;
            row1[c0] *= keep;
        }
    }
}

void depolarize_2q(std::span<Complex> rho, int n_qubits, int qubit_a, int qubit_b,
                   double p) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    const std::size_t udim = static_cast<std::size_t>(dim);
    const std::int64_t quarter = dim / 4;
    const std::size_t ma = qubit_mask(n_qubits, qubit_a);
    const std::size_t mb = qubit_mask(n_qubits, qubit_b);
    const std::size_t offset[4] = {0, mb, ma, ma | mb};
    const double keep = 1.0 - p;
    Complex *data = rho.data();

#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (std::int64_t i = 0; i < quarter; ++i) {
        const std::size_t r = insert_zero_bits(static_cast<std::size_t>(i), ma, mb);
        Complex *rows[4];
        for (int s = 0; s < 4; ++s) {
            rows[s] = data + (r | offset[s]) * udim;
        }
        for (std::int64_t j = 0; j < quarter; ++j) {
            const std::size_t c = insert_zero_bits(static_cast<std::size_t>(j), ma, mb);
            Complex diag_sum = 0.0;
            for (int s = 0; s < 4; ++s) {
                diag_sum += rows[s][c | offset[s]];
            }
            const Complex mixed = 0.25 * p * diag_sum;
            for (int s = 0; s < 4; ++s) {
                for (int t = 0; t < 4; ++t) {
                    Complex &e = rows[s][c | offset[t]];
                    e = s == t ? keep * e + mixed : keep * e;
                }
            }
        }
    }
}

} // namespace echoqem::densitysim::kernels::parallel
