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

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "echoqem/densitysim/density_matrix.hpp"

namespace echoqem::densitysim {

enum class GateKind { kRX, kRZ, kU2, kCNOT };

std::string_view gate_name(GateKind kind);

/// 2x2 complex matrix, row-major.
using Mat2 = std::array<Complex, 4>;

/// One gate. Angles are in radians.
///
///   RX(a)     = exp(-i a X / 2)
///   RZ(a)     = exp(-i a Z / 2)
///   U2(t, p)  = [[cos(t/2), -sin(t/2)], [e^{ip} sin(t/2), e^{ip} cos(t/2)]]
///               i.e. |0> -> cos(t/2)|0> + e^{ip} sin(t/2)|1>
///   CNOT      qubits[0] = control, qubits[1] = target
struct Gate {
    GateKind kind = GateKind::kRX;
    std::array<int, 2> qubits{0, -1};
    double theta = 0.0;
    double phi = 0.0;

    static Gate rx(int qubit, double angle) { return {GateKind::kRX, {qubit, -1}, angle, 0.0}; }
    static Gate rz(int qubit, double angle) { return {GateKind::kRZ, {qubit, -1}, angle, 0.0}; }
    static Gate u2(int qubit, double theta, double phi) {
        return {GateKind::kU2, {qubit, -1}, theta, phi};
    }
    static Gate cnot(int control, int target) {
        return {GateKind::kCNOT, {control, target}, 0.0, 0.0};
    }

    int arity() const noexcept { return kind == GateKind::kCNOT ? 2 : 1; }

    /// Matrix of a single-qubit gate. Throws InvalidGate for CNOT.
    Mat2 matrix() const;

    /// Exact inverse. RX/RZ negate the angle, CNOT is self-inverse. U2 has
    /// no inverse within the gate set and throws InvalidGate.
    Gate inverse() const;

    /// Throws InvalidGate unless every index is < n_qubits and distinct.
    void validate(int n_qubits) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct NoiseModel {
    double q1 = 0.0;
    double q2 = 0.0;

    static NoiseModel noiseless() { return {}; }
    /// Throws InvalidParameter unless 0 <= q1, q2 <= 1.
    void validate() const;

    friend bool operator==(const NoiseModel &, const NoiseModel &) = default;
};

/// Gate list over a fixed register. Each entry carries its own noisy flag,
/// so gates and flags always have equal length.
class Circuit {
  public:
    struct Op {
        Gate gate;
        bool noisy = true;
        friend bool operator==(const Op &, const Op &) = default;
    };

    explicit Circuit(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return ops_.size(); }
    bool empty() const noexcept { return ops_.empty(); }
    const std::vector<Op> &ops() const noexcept { return ops_; }

    /// Validates the gate against the register before appending.
    void add(const Gate &gate, bool noisy);
    void append(const Circuit &other);

    /// Reversed gate order with every gate inverted; flags carried along.
    Circuit inverse() const;

    /// Gate-kind histogram keyed by gate name ("RX", "RZ", "U2", "CNOT").
    std::map<std::string, int> gate_counts() const;

    /// One line per gate: "<index> <name> q=<a>[,<b>] theta=<x> phi=<y> noisy=<0|1>".
    std::string dump() const;

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    int n_qubits_;
    std::vector<Op> ops_;
};

} // namespace echoqem::densitysim
