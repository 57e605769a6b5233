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

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "echoqem/densitysim/simulator.hpp"
#include "echoqem/errors.hpp"
#include "echoqem/tfim/tfim.hpp"
#include "test_util.hpp"

namespace echoqem::tfim {
namespace {

using densitysim::DensityMatrix;
using densitysim::ExecPolicy;
using densitysim::GateKind;
using densitysim::NoiseModel;

TEST(Layout, LadderHasSevenEdges) {
    const Layout l = ladder_layout_6();
    EXPECT_EQ(l.n_qubits, 6);
    ASSERT_EQ(l.edges.size(), 7u);
    EXPECT_EQ(l.degrees(), (std::vector<int>{2, 2, 3, 3, 2, 2}));
    l.validate();
}

TEST(Layout, ValidationErrors) {
    EXPECT_THROW((Layout{3, {{0, 0}}}.validate()), InvalidParameter);
    EXPECT_THROW((Layout{3, {{0, 3}}}.validate()), InvalidParameter);
    EXPECT_THROW((Layout{3, {{0, 1}, {1, 0}}}.validate()), InvalidParameter);
    EXPECT_THROW((IsingParams{1.0, -0.5, 6}.validate()), InvalidParameter);
}

TEST(Circuits, StepGateCounts) {
    const auto counts = trotter_step({}, ladder_layout_6(), 0.1).gate_counts();
    EXPECT_EQ(counts.at("CNOT"), 14);
    EXPECT_EQ(counts.at("RZ"), 7);
    EXPECT_EQ(counts.at("RX"), 6);
}

TEST(Circuits, EchoAndForwardHaveEqualDepth) {
    const auto echo = build_echo_circuit({}, ladder_layout_6(), 0.7, 10).gate_counts();
    const auto fwd = build_forward_circuit({}, ladder_layout_6(), 0.7, 20).gate_counts();
    EXPECT_EQ(echo.at("CNOT"), 280);
    EXPECT_EQ(echo.at("RZ"), 140);
    EXPECT_EQ(echo.at("RX"), 120);
    EXPECT_EQ(echo, fwd);
}

TEST(Circuits, StepListingMatchesGolden) {
    // The golden file is the CLI listing: gate lines, then one counts line.
    std::string golden =
        testing::read_file(std::string(ECHOQEM_GOLDEN_DIR) + "/trotter_step_dt0.1.txt");
    golden.erase(golden.rfind("counts "));
    EXPECT_EQ(trotter_step({}, ladder_layout_6(), 0.1).dump(), golden);
}

TEST(Circuits, StepAnglesFollowTheHamiltonian) {
    const IsingParams p{1.3, 0.4, 6};
    const auto c = trotter_step(p, ladder_layout_6(), 0.25);
    for (const auto &op : c.ops()) {
        EXPECT_TRUE(op.noisy);
        if (op.gate.kind == GateKind::kRX) EXPECT_DOUBLE_EQ(op.gate.theta, -2 * 1.3 * 0.25);
        if (op.gate.kind == GateKind::kRZ) EXPECT_DOUBLE_EQ(op.gate.theta, -2 * 0.4 * 0.25);
    }
}

TEST(Circuits, BackwardIsInverseOfForward) {
    const auto fwd = build_forward_circuit({}, ladder_layout_6(), 1.1, 3);
    EXPECT_EQ(build_backward_circuit({}, ladder_layout_6(), 1.1, 3), fwd.inverse());
    const EvolutionSpec spec{1.1, 3, Direction::kEcho};
    EXPECT_EQ(build_circuit({}, ladder_layout_6(), spec).size(), 2 * fwd.size());
    EXPECT_THROW(build_forward_circuit({}, ladder_layout_6(), 1.0, 0), InvalidParameter);
    EXPECT_THROW(build_forward_circuit({}, ladder_layout_6(), -1.0, 2), InvalidParameter);
}

TEST(Circuits, EchoUnitaryIsIdentity) {
    const auto u = circuit_unitary(build_echo_circuit({}, ladder_layout_6(), 1.3, 10));
    EXPECT_LT(operator_distance(u, Eigen::MatrixXcd::Identity(64, 64)), 1e-12);
}

TEST(Circuits, UnitaryOracleMatchesSimulator) {
    const auto c = build_forward_circuit({}, ladder_layout_6(), 0.9, 2);
    const Eigen::MatrixXcd u = circuit_unitary(c);
    const DensityMatrix rho = testing::random_state(6, 17);
    const Eigen::MatrixXcd expected = u * testing::to_dense(rho) * u.adjoint();
    for (ExecPolicy e : {ExecPolicy::kSerial, ExecPolicy::kParallel}) {
        const auto got = testing::to_dense(densitysim::run_circuit(c, rho, NoiseModel{}, e));
        EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Hamiltonian, TwoSpinMatrix) {
    // H = -h (X1 + X2) - J Z1 Z2 on one edge, built from Kronecker products.
    const Layout l{2, {{0, 1}}};
    const IsingParams p{0.7, 0.3, 2};
    const Eigen::MatrixXcd x1 = testing::embed_1q(2, 0, testing::pauli_x());
    const Eigen::MatrixXcd x2 = testing::embed_1q(2, 1, testing::pauli_x());
    const Eigen::MatrixXcd zz =
        testing::embed_1q(2, 0, testing::pauli_z()) * testing::embed_1q(2, 1, testing::pauli_z());
    const Eigen::MatrixXcd expected = -0.7 * (x1 + x2) - 0.3 * zz;
    EXPECT_LT((hamiltonian(p, l) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExactUnitary, MatchesMatrixExponential) {
    const Layout l{3, {{0, 1}, {1, 2}}};
    const IsingParams p{1.0, 0.5, 3};
    const Eigen::MatrixXcd h = hamiltonian(p, l);
    const Eigen::MatrixXcd expected = (Eigen::MatrixXcd(h * std::complex<double>(0, -0.8))).exp();
    EXPECT_LT(operator_distance(exact_unitary(p, l, 0.8), expected), 1e-12);
    const Eigen::MatrixXcd u = exact_unitary(IsingParams{}, ladder_layout_6(), 2.0);
    EXPECT_LT(operator_distance(u * u.adjoint(), Eigen::MatrixXcd::Identity(64, 64)), 1e-12);
}

TEST(Trotter, FirstOrderConvergence) {
    const double t = std::numbers::pi;
    const Eigen::MatrixXcd exact = exact_unitary({}, ladder_layout_6(), t);
    auto error = [&](int n) {
        return operator_distance(circuit_unitary(build_forward_circuit({}, ladder_layout_6(), t, n)),
                                 exact);
    };
    const double e10 = error(10), e20 = error(20), e40 = error(40);
    EXPECT_GE(e20 / e10, 0.3);
    EXPECT_LE(e20 / e10, 0.7);
    EXPECT_GE(e40 / e20, 0.3);
    EXPECT_LE(e40 / e20, 0.7);
}

TEST(Trotter, SingleStepIsExactWithoutCouplings) {
    const Layout l{2, {}};
    const IsingParams p{0.9, 0.5, 2};
    const auto u = circuit_unitary(build_forward_circuit(p, l, 0.6, 1));
    EXPECT_LT(operator_distance(u, exact_unitary(p, l, 0.6)), 1e-14);
}

TEST(Prep, DeterministicAndWellFormed) {
    const Layout l = ladder_layout_6();
    EXPECT_EQ(build_prep_circuit(5, l), build_prep_circuit(5, l));
    EXPECT_NE(build_prep_circuit(5, l), build_prep_circuit(6, l));
    int cnots = 0, circuits = 400;
    std::set<std::pair<int, int>> edges(l.edges.begin(), l.edges.end());
    for (int s = 0; s < circuits; ++s) {
        const auto c = build_prep_circuit(static_cast<std::uint64_t>(s), l);
        for (std::size_t k = 0; k < c.size(); ++k) {
            const auto &op = c.ops()[k];
            EXPECT_FALSE(op.noisy);
            if (k < 6) {
                EXPECT_EQ(op.gate.kind, GateKind::kU2);
                EXPECT_EQ(op.gate.qubits[0], static_cast<int>(k));
                EXPECT_GE(op.gate.theta, 0.0);
                EXPECT_LE(op.gate.theta, std::numbers::pi);
                EXPECT_GE(op.gate.phi, 0.0);
                EXPECT_LT(op.gate.phi, 2 * std::numbers::pi);
            } else {
                EXPECT_EQ(op.gate.kind, GateKind::kCNOT);
                EXPECT_LT(op.gate.qubits[0], op.gate.qubits[1]);
                EXPECT_TRUE(edges.count({op.gate.qubits[0], op.gate.qubits[1]}));
                ++cnots;
            }
        }
    }
    // Binomial(2800, 0.2): mean 560, sd ~21.
    EXPECT_NEAR(cnots, 0.2 * 7 * circuits, 5 * 21.2);
    EXPECT_EQ(build_prep_circuit(1, l, 0.0).size(), 6u);
    EXPECT_EQ(build_prep_circuit(1, l, 1.0).size(), 13u);
}

TEST(Prep, ProductStateMagnetizationIsUniform) {
    // Without CNOTs each m_i = -cos(theta) = -x with x ~ U[-1, 1].
    const Layout l = ladder_layout_6();
    double sum = 0, sum_sq = 0;
    const int n = 2000;
    for (int s = 0; s < n; ++s) {
        const auto rho = densitysim::run_circuit(build_prep_circuit(s, l, 0.0), DensityMatrix(6),
                                                 NoiseModel{});
        const double m = densitysim::magnetizations(rho)[3];
        sum += m;
        sum_sq += m * m;
    }
    EXPECT_NEAR(sum / n, 0.0, 5 * std::sqrt(1.0 / 3.0 / n));
    EXPECT_NEAR(sum_sq / n, 1.0 / 3.0, 0.03);
}

} // namespace
} // namespace echoqem::tfim
