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

#include "echoqem/densitysim/circuit.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "echoqem/errors.hpp"

namespace echoqem::densitysim {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::kRX:
        return "RX";
    case GateKind::kRZ:
        return "RZ";
    case GateKind::kU2:
        return "U2";
    case GateKind::kCNOT:
        return "CNOT";
    }
    return "?";
}

Mat2 Gate::matrix() const {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex i{0.0, 1.0};
    switch (kind) {
    case GateKind::kRX:
        return {c, -i * s, -i * s, c};
    case GateKind::kRZ:
        return {std::exp(-i * (theta / 2.0)), 0.0, 0.0, std::exp(i * (theta / 2.0))};
    case GateKind::kU2: {
        const Complex e = std::exp(i * phi);
        return {c, -s, e * s, e * c};
    }
    case GateKind::kCNOT:
        break;
    }
    throw InvalidGate("CNOT has no single-qubit matrix");
}

Gate Gate::inverse() const {
    switch (kind) {
    case GateKind::kRX:
        return rx(qubits[0], -theta);
    case GateKind::kRZ:
        return rz(qubits[0], -theta);
    case GateKind::kCNOT:
        return *this;
    case GateKind::kU2:
        break;
    }
    throw InvalidGate("U2 gate has no inverse in the gate set");
}

void Gate::validate(int n_qubits) const {
    for (int k = 0; k < arity(); ++k) {
        if (qubits[k] < 0 || qubits[k] >= n_qubits) {
            throw InvalidGate(fmt::format("{} qubit index {} out of range for {} qubits",
                                          gate_name(kind), qubits[k], n_qubits));
        }
    }
    if (arity() == 2 && qubits[0] == qubits[1]) {
        throw InvalidGate(fmt::format("{} needs distinct qubits, got {} twice", gate_name(kind),
                                      qubits[0]));
    }
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw InvalidGate(fmt::format("{} has a non-finite angle", gate_name(kind)));
    }
}

void NoiseModel::validate() const {
    if (!(q1 >= 0.0 && q1 <= 1.0)) {
        throw InvalidParameter(fmt::format("q1 must be in [0, 1], got {}", q1));
    }
    if (!(q2 >= 0.0 && q2 <= 1.0)) {
        throw InvalidParameter(fmt::format("q2 must be in [0, 1], got {}", q2));
    }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw InvalidParameter(fmt::format("n_qubits must be in [1, {}]", kMaxQubits));
    }
}

void Circuit::add(const Gate &gate, bool noisy) {
    gate.validate(n_qubits_);
    ops_.push_back({gate, noisy});
}

void Circuit::append(const Circuit &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw ShapeError("cannot append circuits over different registers");
    }
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
}

Circuit Circuit::inverse() const {
    Circuit inv(n_qubits_);
    inv.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        inv.ops_.push_back({it->gate.inverse(), it->noisy});
    }
    return inv;
}

std::map<std::string, int> Circuit::gate_counts() const {
    std::map<std::string, int> counts;
    for (const Op &op : ops_) {
        ++counts[std::string(gate_name(op.gate.kind))];
    }
    return counts;
}

std::string Circuit::dump() const {
    std::string out;
    for (std::size_t k = 0; k < ops_.size(); ++k) {
        const Gate &g = ops_[k].gate;
        const std::string qubits = g.arity() == 2
                                       ? fmt::format("{},{}", g.qubits[0], g.qubits[1])
                                       : fmt::format("{}", g.qubits[0]);
        out += fmt::format("{} {} q={} theta={:.17g} phi={:.17g} noisy={}\n", k,
                           gate_name(g.kind), qubits, g.theta, g.phi, ops_[k].noisy ? 1 : 0);
    }
    return out;
}

} // namespace echoqem::densitysim
