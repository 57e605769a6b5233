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

#include "echoqem/densitysim/simulator.hpp"

#include <algorithm>
#include <vector>

#include <fmt/format.h>

#include "echoqem/densitysim/kernels.hpp"
#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::densitysim {

namespace {

void check_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter(fmt::format("{} must be in [0, 1], got {}", name, p));
    }
}

void check_qubit(const DensityMatrix &state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw InvalidGate(fmt::format("qubit index {} out of range for {} qubits", qubit,
                                      state.n_qubits()));
    }
}

} // namespace

void apply_gate_inplace(DensityMatrix &state, const Gate &gate, ExecPolicy exec) {
    gate.validate(state.n_qubits());
    const int n = state.n_qubits();
    const bool par = exec == ExecPolicy::kParallel;
    if (gate.kind == GateKind::kCNOT) {
        if (par) {
            kernels::parallel::apply_cnot(state.data(), n, gate.qubits[0], gate.qubits[1]);
        } else {
            kernels::serial::apply_cnot(state.data(), n, gate.qubits[0], gate.qubits[1]);
        }
        return;
    }
    const Mat2 u = gate.matrix();
    if (par) {
        kernels::parallel::apply_1q(state.data(), n, gate.qubits[0], u);
    } else {
        kernels::serial::apply_1q(state.data(), n, gate.qubits[0], u);
    }
}

void apply_depolarizing_1q_inplace(DensityMatrix &state, int qubit, double q1,
                                   ExecPolicy exec) {
    check_probability(q1, "q1");
    check_qubit(state, qubit);
    if (exec == ExecPolicy::kParallel) {
        kernels::parallel::depolarize_1q(state.data(), state.n_qubits(), qubit, q1);
    } else {
        kernels::serial::depolarize_1q(state.data(), state.n_qubits(), qubit, q1);
    }
}

void apply_depolarizing_2q_inplace(DensityMatrix &state, int qubit_a, int qubit_b, double q2,
                                   ExecPolicy exec) {
    check_probability(q2, "q2");
    check_qubit(state, qubit_a);
    check_qubit(state, qubit_b);
    if (qubit_a == qubit_b) {
        throw InvalidGate(fmt::format("two-qubit channel needs distinct qubits, got {} twice",
                                      qubit_a));
    }
    if (exec == ExecPolicy::kParallel) {
        kernels::parallel::depolarize_2q(state.data(), state.n_qubits(), qubit_a, qubit_b, q2);
    } else {
        kernels::serial::depolarize_2q(state.data(), state.n_qubits(), qubit_a, qubit_b, q2);
    }
}

DensityMatrix apply_gate(const DensityMatrix &state, const Gate &gate, ExecPolicy exec) {
    DensityMatrix out = state;
    apply_gate_inplace(out, gate, exec);
    return out;
}

DensityMatrix apply_depolarizing_1q(const DensityMatrix &state, int qubit, double q1,
                                    ExecPolicy exec) {
    DensityMatrix out = state;
    apply_depolarizing_1q_inplace(out, qubit, q1, exec);
    return out;
}

DensityMatrix apply_depolarizing_2q(const DensityMatrix &state, int qubit_a, int qubit_b,
                                    double q2, ExecPolicy exec) {
    DensityMatrix out = state;
    apply_depolarizing_2q_inplace(out, qubit_a, qubit_b, q2, exec);
    return out;
}

DensityMatrix apply_depolarizing_1q_kraus(const DensityMatrix &state, int qubit, double q1) {
    check_probability(q1, "q1");
    check_qubit(state, qubit);
    const Complex i{0.0, 1.0};
    const Mat2 paulis[3] = {
        {0.0, 1.0, 1.0, 0.0},  // X
        {0.0, -i, i, 0.0},     // Y
        {1.0, 0.0, 0.0, -1.0}, // Z
    };
    const int n = state.n_qubits();
    std::vector<Complex> acc(state.data().begin(), state.data().end());
    const double w_identity = 1.0 - 0.75 * q1;
    for (Complex &e : acc) {
        e *= w_identity;
    }
    for (const Mat2 &pauli : paulis) {
        DensityMatrix term = state;
        kernels::serial::apply_1q(term.data(), n, qubit, pauli);
        const auto src = term.data();
        for (std::size_t k = 0; k < acc.size(); ++k) {
            acc[k] += 0.25 * q1 * src[k];
        }
    }
    return DensityMatrix::from_elements(n, std::move(acc));
}

DensityMatrix run_circuit(const Circuit &circuit, const DensityMatrix &initial,
                          const NoiseModel &noise, ExecPolicy exec,
                          const StepObserver &observer) {
    noise.validate();
    if (circuit.n_qubits() != initial.n_qubits()) {
        throw ShapeError(fmt::format("circuit acts on {} qubits, state has {}",
                                     circuit.n_qubits(), initial.n_qubits()));
    }
    DensityMatrix state = initial;
    const auto &ops = circuit.ops();
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const Gate &g = ops[k].gate;
        apply_gate_inplace(state, g, exec);
        if (ops[k].noisy) {
            if (g.arity() == 2) {
                if (noise.q2 > 0.0) {
                    apply_depolarizing_2q_inplace(state, g.qubits[0], g.qubits[1], noise.q2, exec);
                }
            } else if (noise.q1 > 0.0) {
                apply_depolarizing_1q_inplace(state, g.qubits[0], noise.q1, exec);
            }
        }
        if (observer) {
            observer(k, state);
        }
    }
    return state;
}

MagnetizationVector magnetizations(const DensityMatrix &state) {
    const int n = state.n_qubits();
    const std::size_t dim = state.dim();
    std::vector<double> excitation(static_cast<std::size_t>(n), 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
        const double p = state(x, x).real();
        for (int q = 0; q < n; ++q) {
            if (x & qubit_mask(n, q)) {
                excitation[static_cast<std::size_t>(q)] += p;
            }
        }
    }
    MagnetizationVector m(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        m[static_cast<std::size_t>(q)] = 2.0 * excitation[static_cast<std::size_t>(q)] - 1.0;
    }
    return m;
}

MagnetizationVector sample_magnetizations(const DensityMatrix &state, std::uint64_t shots,
                                          std::uint64_t rng_seed) {
    if (shots == 0) {
        throw InvalidParameter("shots must be >= 1");
    }
    const int n = state.n_qubits();
    const std::size_t dim = state.dim();
    std::vector<double> cumulative(dim);
    double total = 0.0;
    for (std::size_t x = 0; x < dim; ++x) {
        total += std::max(0.0, state(x, x).real());
        cumulative[x] = total;
    }

    Rng rng(rng_seed);
    std::vector<std::uint64_t> ones(static_cast<std::size_t>(n), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t x = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), dim - 1);
        for (int q = 0; q < n; ++q) {
            if (x & qubit_mask(n, q)) {
                ++ones[static_cast<std::size_t>(q)];
            }
        }
    }
    MagnetizationVector m(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        m[static_cast<std::size_t>(q)] =
            2.0 * static_cast<double>(ones[static_cast<std::size_t>(q)]) /
                static_cast<double>(shots) -
            1.0;
    }
    return m;
}

} // namespace echoqem::densitysim
