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

// In-place kernels on a row-major 2^n x 2^n density matrix buffer.
//
// Two implementations with identical signatures live here:
//   kernels::serial    plain loops; the reference used by the tests
//   kernels::parallel  blocked single-pass loops distributed with OpenMP
//
// The two agree to rounding, not bitwise. Neither validates its arguments;
// the simulator layer does that.

#include <cstdint>
#include <span>

#include "echoqem/densitysim/circuit.hpp"
#include "echoqem/densitysim/density_matrix.hpp"

namespace echoqem::densitysim::kernels {

namespace serial {

/// rho -> U rho U^dagger for a single-qubit U.
void apply_1q(std::span<Complex> rho, int n_qubits, int qubit, const Mat2 &u);

/// rho -> P rho P with P the CNOT permutation.
void apply_cnot(std::span<Complex> rho, int n_qubits, int control, int target);

/// rho -> (1-p) rho + p Tr_q(rho) (x) I/2 on qubit q.
void depolarize_1q(std::span<Complex> rho, int n_qubits, int qubit, double p);

/// rho -> (1-p) rho + p Tr_ab(rho) (x) I/4 on qubits a, b.
void depolarize_2q(std::span<Complex> rho, int n_qubits, int qubit_a, int qubit_b,
                   double p);

} // namespace serial

namespace parallel {

/// Below this matrix dimension the OpenMP loops run on the calling thread.
inline constexpr std::int64_t kParallelMinDim = 256;

void apply_1q(std::span<Complex> rho, int n_qubits, int qubit, const Mat2 &u);
void apply_cnot(std::span<Complex> rho, int n_qubits, int control, int target);
void depolarize_1q(std::span<Complex> rho, int n_qubits, int qubit, double p);
void depolarize_2q(std::span<Complex> rho, int n_qubits, int qubit_a, int qubit_b,
                   double p);

} // namespace parallel

} // namespace echoqem::densitysim::kernels
