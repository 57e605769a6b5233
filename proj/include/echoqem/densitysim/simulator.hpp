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

#include <cstdint>
#include <functional>

#include "echoqem/densitysim/circuit.hpp"
#include "echoqem/densitysim/density_matrix.hpp"

namespace echoqem::densitysim {

/// Which kernel family runs a gate or channel: the serial reference loops
/// or the OpenMP ones. The OpenMP kernels are also the faster choice on a
/// single thread, and stay on the calling thread for small registers.
enum class ExecPolicy { kSerial, kParallel };

// Value-semantics API: the input state is never modified.

DensityMatrix apply_gate(const DensityMatrix &state, const Gate &gate,
                         ExecPolicy exec = ExecPolicy::kParallel);

DensityMatrix apply_depolarizing_1q(const DensityMatrix &state, int qubit, double q1,
                                    ExecPolicy exec = ExecPolicy::kParallel);

DensityMatrix apply_depolarizing_2q(const DensityMatrix &state, int qubit_a, int qubit_b,
                                    double q2, ExecPolicy exec = ExecPolicy::kParallel);

/// Pauli-twirl form of the single-qubit channel:
///   (1 - 3q/4) rho + (q/4) (X rho X + Y rho Y + Z rho Z).
/// Mathematically equal to apply_depolarizing_1q; kept as an independent
/// route for cross-checking.
DensityMatrix apply_depolarizing_1q_kraus(const DensityMatrix &state, int qubit, double q1);

// In-place variants used on hot paths.

void apply_gate_inplace(DensityMatrix &state, const Gate &gate,
                        ExecPolicy exec = ExecPolicy::kParallel);
void apply_depolarizing_1q_inplace(DensityMatrix &state, int qubit, double q1,
                                   ExecPolicy exec = ExecPolicy::kParallel);
void apply_depolarizing_2q_inplace(DensityMatrix &state, int qubit_a, int qubit_b,
                                   double q2, ExecPolicy exec = ExecPolicy::kParallel);

/// Called after each gate (and its trailing channel, if any) with the gate
/// index and the current state.
using StepObserver = std::function<void(std::size_t, const DensityMatrix &)>;

/// Runs the circuit gate by gate. After every gate flagged noisy, a
/// depolarizing channel acts on exactly that gate's qubits: the 1q channel
/// (q1) after single-qubit gates, the 2q channel (q2) after CNOT.
DensityMatrix run_circuit(const Circuit &circuit, const DensityMatrix &initial,
                          const NoiseModel &noise, ExecPolicy exec = ExecPolicy::kParallel,
                          const StepObserver &observer = {});

/// Exact m_i = 2 <|1><1|_i> - 1 for every qubit.
MagnetizationVector magnetizations(const DensityMatrix &state);

/// Shot-sampled magnetizations: `shots` computational-basis draws from
/// diag(rho), deterministic in `rng_seed`. Throws InvalidParameter for shots == 0.
MagnetizationVector sample_magnetizations(const DensityMatrix &state, std::uint64_t shots,
                                          std::uint64_t rng_seed);

} // namespace echoqem::densitysim
