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

// Transverse-field Ising model on a qubit graph,
//
//   H = -h sum_i X_i - J sum_{(i,j) in edges} Z_i Z_j,
//
// and the first-order Trotter circuits that approximate exp(-iHt).
//
// Angle convention. With RX(a) = exp(-i a X/2) and RZ(a) = exp(-i a Z/2),
// one step of length dt is
//
//   exp(-i dt H) ~= prod_edges exp(+i J dt Z_i Z_j) * prod_i exp(+i h dt X_i)
//                 = prod_edges [CNOT(i,j) RZ_j(-2 J dt) CNOT(i,j)] * prod_i RX_i(-2 h dt)
//
// The RX layer acts first. Angles carry the sign of the Hamiltonian terms;
// the Trotter-convergence tests against exact_unitary pin this.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "echoqem/densitysim/circuit.hpp"

namespace echoqem::tfim {

using densitysim::Circuit;

struct IsingParams {
    double h = 1.0;
    double J = 0.5;
    int n_spins = 6;

    /// Throws InvalidParameter unless h > 0, J > 0 and n_spins >= 1.
    void validate() const;
    friend bool operator==(const IsingParams &, const IsingParams &) = default;
};

/// Qubit connectivity. Edges are unordered; (i, j) is stored as given and
/// treated the same as (j, i).
struct Layout {
    int n_qubits = 0;
    std::vector<std::pair<int, int>> edges;

    /// Throws InvalidParameter on self-loops, out-of-range indices or
    /// duplicate edges (in either orientation).
    void validate() const;
    std::vector<int> degrees() const;
    friend bool operator==(const Layout &, const Layout &) = default;
};

enum class Direction { kForward, kBackward, kEcho };

struct EvolutionSpec {
    double t = 0.0;
    int n_trotter = 1;
    Direction direction = Direction::kForward;

    void validate() const;
};

/// 2x3 ladder: rungs (0,1) (2,3) (4,5), rails (0,2) (1,3) (2,4) (3,5).
/// The order matches the three parallel coupling layers of one step.
Layout ladder_layout_6();

/// One first-order step: RX on every qubit, then one R_ZZ (CNOT, RZ, CNOT)
/// per edge. All gates flagged noisy.
Circuit trotter_step(const IsingParams &params, const Layout &layout, double dt);

/// n_trotter steps of length t / n_trotter. The full gate sequence is emitted
/// even for t = 0, so noise exposure does not depend on t.
Circuit build_forward_circuit(const IsingParams &params, const Layout &layout, double t,
                              int n_trotter);

/// Gate-by-gate inverse of the forward circuit.
Circuit build_backward_circuit(const IsingParams &params, const Layout &layout, double t,
                               int n_trotter);

/// Forward for time t, then its exact inverse: 2 * n_trotter_each_way steps.
Circuit build_echo_circuit(const IsingParams &params, const Layout &layout, double t,
                           int n_trotter_each_way);

Circuit build_circuit(const IsingParams &params, const Layout &layout,
                      const EvolutionSpec &spec);

inline constexpr double kDefaultPrepCnotProb = 0.2;

/// Random product-state layer U2(arccos x, phi), x ~ U[-1,1], phi ~ U[0,2pi),
/// on every qubit, then a CNOT (control = lower index) on each layout edge
/// independently with probability cnot_prob. All gates noiseless.
Circuit build_prep_circuit(std::uint64_t rng_seed, const Layout &layout,
                           double cnot_prob = kDefaultPrepCnotProb);

/// Dense Hamiltonian. Basis ordering follows densitysim (qubit 0 = MSB).
Eigen::MatrixXcd hamiltonian(const IsingParams &params, const Layout &layout);

/// exp(-iHt) via eigendecomposition of H. Requires n_spins <= 10.
Eigen::MatrixXcd exact_unitary(const IsingParams &params, const Layout &layout, double t);

/// Dense unitary of a circuit (noise flags ignored), built from Kronecker
/// products independently of the density-matrix kernels.
Eigen::MatrixXcd circuit_unitary(const Circuit &circuit);

/// Spectral-norm distance ||A - B||_2.
double operator_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

} // namespace echoqem::tfim
