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

#include "echoqem/tfim/tfim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::tfim {

using densitysim::Gate;
using densitysim::GateKind;

void IsingParams::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidParameter(fmt::format("h must be > 0, got {}", h));
    }
    if (!(J > 0.0) || !std::isfinite(J)) {
        throw InvalidParameter(fmt::format("J must be > 0, got {}", J));
    }
    if (n_spins < 1 || n_spins > densitysim::kMaxQubits) {
        throw InvalidParameter(fmt::format("n_spins must be in [1, {}], got {}",
                                           densitysim::kMaxQubits, n_spins));
    }
}

void Layout::validate() const {
    if (n_qubits < 1 || n_qubits > densitysim::kMaxQubits) {
        throw InvalidParameter(fmt::format("layout n_qubits out of range: {}", n_qubits));
    }
    std::set<std::pair<int, int>> seen;
    for (const auto &[a, b] : edges) {
        if (a < 0 || b < 0 || a >= n_qubits || b >= n_qubits) {
            throw InvalidParameter(fmt::format("edge ({}, {}) out of range", a, b));
        }
        if (a == b) {
            throw InvalidParameter(fmt::format("self-loop on qubit {}", a));
        }
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
            throw InvalidParameter(fmt::format("duplicate edge ({}, {})", a, b));
        }
    }
}

std::vector<int> Layout::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_qubits), 0);
    for (const auto &[a, b] : edges) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    return deg;
}

void EvolutionSpec::validate() const {
    if (n_trotter < 1) {
        throw InvalidParameter(fmt::format("n_trotter must be >= 1, got {}", n_trotter));
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidParameter(fmt::format("t must be finite and >= 0, got {}", t));
    }
}

Layout ladder_layout_6() {
    return Layout{6, {{0, 1}, {2, 3}, {4, 5}, {0, 2}, {1, 3}, {2, 4}, {3, 5}}};
}

namespace {

void check_compatible(const IsingParams &params, const Layout &layout) {
    params.validate();
    layout.validate();
    if (layout.n_qubits != params.n_spins) {
        throw ShapeError(fmt::format("layout has {} qubits but model has {} spins",
                                     layout.n_qubits, params.n_spins));
    }
}

// -0.0 would otherwise leak into circuit dumps for t = 0.
double angle(double x) { return x + 0.0; }

void append_step(Circuit &circuit, const IsingParams &params, const Layout &layout,
                 double dt) {
    const double rx_angle = angle(-2.0 * params.h * dt);
    const double rz_angle = angle(-2.0 * params.J * dt);
    for (int q = 0; q < layout.n_qubits; ++q) {
        circuit.add(Gate::rx(q, rx_angle), true);
    }
    for (const auto &[a, b] : layout.edges) {
        circuit.add(Gate::cnot(a, b), true);
        circuit.add(Gate::rz(b, rz_angle), true);
        circuit.add(Gate::cnot(a, b), true);
    }
}

} // namespace

Circuit trotter_step(const IsingParams &params, const Layout &layout, double dt) {
    check_compatible(params, layout);
    if (!std::isfinite(dt)) {
        throw InvalidParameter("dt must be finite");
    }
    Circuit circuit(layout.n_qubits);
    append_step(circuit, params, layout, dt);
    return circuit;
}

Circuit build_forward_circuit(const IsingParams &params, const Layout &layout, double t,
                              int n_trotter) {
    check_compatible(params, layout);
    EvolutionSpec{t, n_trotter, Direction::kForward}.validate();
    const double dt = t / n_trotter;
    Circuit circuit(layout.n_qubits);
    for (int s = 0; s < n_trotter; ++s) {
        append_step(circuit, params, layout, dt);
    }
    return circuit;
}

Circuit build_backward_circuit(const IsingParams &params, const Layout &layout, double t,
                               int n_trotter) {
    return build_forward_circuit(params, layout, t, n_trotter).inverse();
}

Circuit build_echo_circuit(const IsingParams &params, const Layout &layout, double t,
                           int n_trotter_each_way) {
    Circuit circuit = build_forward_circuit(params, layout, t, n_trotter_each_way);
    circuit.append(circuit.inverse());
    return circuit;
}

Circuit build_circuit(const IsingParams &params, const Layout &layout,
                      const EvolutionSpec &spec) {
    spec.validate();
    switch (spec.direction) {
    case Direction::kForward:
        return build_forward_circuit(params, layout, spec.t, spec.n_trotter);
    case Direction::kBackward:
        return build_backward_circuit(params, layout, spec.t, spec.n_trotter);
    case Direction::kEcho:
        return build_echo_circuit(params, layout, spec.t, spec.n_trotter);
    }
    throw InvalidParameter("unknown evolution direction");
}

Circuit build_prep_circuit(std::uint64_t rng_seed, const Layout &layout, double cnot_prob) {
    layout.validate();
    if (!(cnot_prob >= 0.0 && cnot_prob <= 1.0)) {
        throw InvalidParameter(fmt::format("cnot_prob must be in [0, 1], got {}", cnot_prob));
    }
    Rng rng(rng_seed);
    Circuit circuit(layout.n_qubits);
    for (int q = 0; q < layout.n_qubits; ++q) {
        const double theta = std::acos(rng.uniform(-1.0, 1.0));
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        circuit.add(Gate::u2(q, theta, phi), false);
    }
    for (const auto &[a, b] : layout.edges) {
        if (rng.uniform() < cnot_prob) {
            circuit.add(Gate::cnot(std::min(a, b), std::max(a, b)), false);
        }
    }
    return circuit;
}

namespace {

// Operator `single` on `qubit`, identity elsewhere.
Eigen::MatrixXcd embed_1q(int n, int qubit, const Eigen::Matrix2cd &single) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        const Eigen::MatrixXcd factor =
            q == qubit ? Eigen::MatrixXcd(single) : Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
            }
        }
        out = std::move(next);
    }
    return out;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd to_eigen(const densitysim::Mat2 &m) {
    Eigen::Matrix2cd out;
    out << m[0], m[1], m[2], m[3];
    return out;
}

} // namespace

Eigen::MatrixXcd hamiltonian(const IsingParams &params, const Layout &layout) {
    check_compatible(params, layout);
    const int n = params.n_spins;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int q = 0; q < n; ++q) {
        h -= params.h * embed_1q(n, q, pauli_x());
    }
    for (const auto &[a, b] : layout.edges) {
        h -= params.J * embed_1q(n, a, pauli_z()) * embed_1q(n, b, pauli_z());
    }
    return h;
}

Eigen::MatrixXcd exact_unitary(const IsingParams &params, const Layout &layout, double t) {
    if (params.n_spins > 10) {
        throw InvalidParameter("exact_unitary supports at most 10 spins");
    }
    const Eigen::MatrixXcd h = hamiltonian(params, layout);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXd &energies = solver.eigenvalues();
    const Eigen::MatrixXcd &vectors = solver.eigenvectors();
    Eigen::VectorXcd phases(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
        phases(k) = std::exp(std::complex<double>(0.0, -energies(k) * t));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

Eigen::MatrixXcd circuit_unitary(const Circuit &circuit) {
    const int n = circuit.n_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto &op : circuit.ops()) {
        const Gate &g = op.gate;
        if (g.kind == GateKind::kCNOT) {
            // |1><1|_c (x) X_t + |0><0|_c (x) I
            Eigen::Matrix2cd p0, p1;
            p0 << 1, 0, 0, 0;
            p1 << 0, 0, 0, 1;
            const Eigen::MatrixXcd cnot =
                embed_1q(n, g.qubits[0], p0) +
                embed_1q(n, g.qubits[0], p1) * embed_1q(n, g.qubits[1], pauli_x());
            u = cnot * u;
        } else {
            u = embed_1q(n, g.qubits[0], to_eigen(g.matrix())) * u;
        }
    }
    return u;
}

double operator_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("operator_distance: shape mismatch");
    }
    const Eigen::MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d.adjoint() * d,
                                                           Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

} // namespace echoqem::tfim
