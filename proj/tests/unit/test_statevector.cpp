// Copyright 2026 The dmftqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dmftqsim/circuits.hpp"
#include "dmftqsim/statevector.hpp"

namespace dmftqsim {
namespace {

std::vector<Gate> random_circuit(int n_gates, int n_qubits, Rng& rng) {
  std::vector<Gate> gates;
  for (int g = 0; g < n_gates; ++g) {
    const int a = 1 + static_cast<int>(rng.below(n_qubits));
    int b = 1 + static_cast<int>(rng.below(n_qubits - 1));
    if (b >= a) ++b;
    const double th = rng.uniform(-M_PI, M_PI);
    switch (rng.below(8)) {
      case 0: gates.push_back(Gate::ry(a, th)); break;
      case 1: gates.push_back(Gate::rz(a, th)); break;
      case 2: gates.push_back(Gate::h(a)); break;
      case 3: gates.push_back(Gate::s(a)); break;
      case 4: gates.push_back(Gate::cnot(a, b)); break;
      case 5:
        gates.push_back(Gate::controlled_pauli(a, b, static_cast<Axis>(rng.below(3)),
                                               static_cast<int>(rng.below(2))));
        break;
      case 6: gates.push_back(Gate::y(a)); break;
      default: {
        const auto blk = xxyy_block(th, a, b);
        gates.insert(gates.end(), blk.gates.begin(), blk.gates.end());
      }
    }
  }
  return gates;
}

TEST(Statevector, XFlipsOneBit) {
  auto s = QuantumState::zero(5);
  s.apply_gate(Gate::x(1));
  EXPECT_NEAR(std::abs(s.vector()(1)), 1.0, 1e-15);
  EXPECT_NEAR(s.vector().norm(), 1.0, 1e-15);
}

TEST(Statevector, GateMatricesAreUnitary) {
  Rng rng(5);
  for (const auto& g : random_circuit(200, 5, rng)) {
    if (g.is_two_qubit()) {
      const Eigen::Matrix4cd m = g.pair_matrix();
      EXPECT_LT((m * m.adjoint() - Eigen::Matrix4cd::Identity()).norm(), 1e-12) << g.name();
    } else {
      const Eigen::Matrix2cd m = g.single_matrix();
      EXPECT_LT((m * m.adjoint() - Eigen::Matrix2cd::Identity()).norm(), 1e-12) << g.name();
    }
  }
}

TEST(Statevector, LongRandomCircuitsPreserveNormAndTrace) {
  Rng rng(11);
  const auto gates = random_circuit(1000, 5, rng);
  auto pure = QuantumState::zero(5);
  apply_circuit(pure, gates);
  EXPECT_NEAR(pure.vector().norm(), 1.0, 1e-10);

  auto rho = QuantumState::zero(5, StateMode::Density);
  NoiseModel noise;
  noise.two_qubit_depolarizing = 0.02;
  apply_circuit(rho, gates, noise);
  const auto& d = rho.density();
  EXPECT_NEAR(d.trace().real(), 1.0, 1e-10);
  EXPECT_LT((d - d.adjoint()).norm(), 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Statevector, CircuitThenInverseRestoresState) {
  Rng rng(3);
  Circuit c{5, random_circuit(300, 5, rng)};
  auto s = QuantumState::zero(5);
  apply_circuit(s, random_circuit(20, 5, rng));
  const Eigen::VectorXcd start = s.vector();
  apply_circuit(s, c);
  apply_circuit(s, c.inverse());
  EXPECT_LT((s.vector() - start).norm(), 1e-10);
}

TEST(Statevector, PauliExpectations) {
  for (int k = 1; k <= 5; ++k) {
    EXPECT_DOUBLE_EQ(pauli_expectation(QuantumState::zero(5), {{{k, Axis::Z}}}), 1.0);
  }
  auto plus = QuantumState::zero(5);
  plus.apply_gate(Gate::h(5));
  EXPECT_NEAR(pauli_expectation(plus, {{{5, Axis::X}}}), 1.0, 1e-15);

  const auto mixed = QuantumState::from_density(Eigen::MatrixXcd::Identity(4, 4) / 4.0);
  EXPECT_NEAR(pauli_expectation(mixed, {{{1, Axis::Z}, {2, Axis::Z}}}), 0.0, 1e-15);
  EXPECT_THROW(pauli_expectation(mixed, {{{3, Axis::Z}}}), std::out_of_range);
}

TEST(Statevector, SampleOfCertainOutcomeIsExact) {
  auto s = QuantumState::zero(5);
  s.apply_gate(Gate::h(5));
  EXPECT_EQ(sample_expectation(s, Basis::X, 8192, {}, 1), 1.0);
  s.apply_gate(Gate::s(5));
  EXPECT_EQ(sample_expectation(s, Basis::Y, 8192, {}, 2), 1.0);
}

TEST(Statevector, UnbiasedSampleWithinBinomialBand) {
  const auto s = QuantumState::zero(5);
  const double band = 3.0 / std::sqrt(8192.0);
  int inside = 0;
  const int seeds = 300;
  for (int seed = 0; seed < seeds; ++seed) {
    if (std::abs(sample_expectation(s, Basis::X, 8192, {}, seed)) <= band) ++inside;
  }
  EXPECT_GE(inside, static_cast<int>(0.99 * seeds));
}

TEST(Statevector, ReadoutBiasOnCertainOutcomes) {
  // |0> reads 1 with p01 and |1> reads 0 with p10.
  const std::uint64_t shots = 1u << 20;
  const double tol = 5.0 * std::sqrt(0.19 / shots);
  NoiseModel n10;
  n10.readout_p10 = 0.05;
  auto one = QuantumState::zero(5);
  one.apply_gate(Gate::x(5));
  EXPECT_NEAR(sample_expectation(one, Basis::Z, shots, n10, 4), -0.9, tol);
  EXPECT_EQ(sample_expectation(QuantumState::zero(5), Basis::Z, 4096, n10, 4), 1.0);

  NoiseModel n01;
  n01.readout_p01 = 0.05;
  EXPECT_NEAR(sample_expectation(QuantumState::zero(5), Basis::Z, shots, n01, 4), 0.9, tol);
}

TEST(Statevector, SamplingConvergesAtShotNoiseRate) {
  auto s = QuantumState::zero(5);
  s.apply_gate(Gate::ry(5, 1.1));
  s.apply_gate(Gate::rz(5, 0.4));
  const double exact = pauli_expectation(s, {{{5, Axis::X}}});
  for (std::uint64_t shots : {1000u, 10000u, 100000u, 1000000u}) {
    const double sigma = std::sqrt((1 - exact * exact) / shots);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_NEAR(sample_expectation(s, Basis::X, shots, {}, seed), exact, 4.5 * sigma) << shots;
    }
  }
}

TEST(Statevector, SamplingIsDeterministicPerSeed) {
  auto s = QuantumState::zero(5);
  s.apply_gate(Gate::ry(5, 0.9));
  EXPECT_EQ(sample_expectation(s, Basis::X, 999, {}, 42), sample_expectation(s, Basis::X, 999, {}, 42));
}

TEST(Statevector, DepolarizingChannel) {
  Rng rng(8);
  auto rho = QuantumState::zero(3, StateMode::Density);
  apply_circuit(rho, random_circuit(30, 3, rng));
  const Eigen::MatrixXcd before = rho.density();
  depolarizing_channel(rho, 1, 3, 0.0);
  EXPECT_LT((rho.density() - before).norm(), 1e-15);

  auto pair = QuantumState::zero(2, StateMode::Density);
  depolarizing_channel(pair, 1, 2, 1.0);
  EXPECT_LT((pair.density() - Eigen::MatrixXcd::Identity(4, 4) / 4.0).norm(), 1e-15);

  auto z = QuantumState::zero(2, StateMode::Density);
  depolarizing_channel(z, 1, 2, 0.1);
  EXPECT_NEAR(pauli_expectation(z, {{{1, Axis::Z}}}), 0.9, 1e-15);

  auto g = QuantumState::zero(3, StateMode::Density);
  global_depolarizing_channel(g, 0.25);
  EXPECT_NEAR(pauli_expectation(g, {{{2, Axis::Z}}}), 0.75, 1e-15);

  auto pure = QuantumState::zero(2);
  EXPECT_THROW(depolarizing_channel(pure, 1, 2, 0.1), std::invalid_argument);
}

TEST(Statevector, TrajectoriesAverageToDensityResult) {
  NoiseModel noise;
  noise.two_qubit_depolarizing = 0.05;
  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    Rng crng(100 + draw);
    const auto gates = random_circuit(40, 4, crng);
    const std::vector<PauliFactor> obs{{1, Axis::Z}, {static_cast<int>(2 + draw), Axis::X}};

    auto rho = QuantumState::zero(4, StateMode::Density);
    apply_circuit(rho, gates, noise);
    const double exact = pauli_expectation(rho, obs);

    Rng rng(derive_seed(7, {draw}));
    const int n = 4000;
    double sum = 0, sum2 = 0;
    for (int t = 0; t < n; ++t) {
      auto psi = QuantumState::zero(4);
      apply_circuit(psi, gates, noise, &rng);
      const double x = pauli_expectation(psi, obs);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt(std::max(sum2 / n - mean * mean, 1e-12) / n);
    EXPECT_NEAR(mean, exact, 3.0 * se) << "draw " << draw;
  }
}

TEST(Statevector, Errors) {
  auto s = QuantumState::zero(5);
  EXPECT_THROW(s.apply_gate(Gate::x(6)), std::out_of_range);
  EXPECT_THROW(s.apply_gate(Gate::cnot(0, 2)), std::out_of_range);
  NoiseModel noisy;
  noisy.two_qubit_depolarizing = 0.1;
  const std::vector<Gate> gates{Gate::cnot(1, 2)};
  EXPECT_THROW(apply_circuit(s, gates, noisy), std::invalid_argument);
  noisy.seed = 3;
  EXPECT_NO_THROW(apply_circuit(s, gates, noisy));
  EXPECT_THROW(sample_expectation(s, Basis::X, 0, {}, 1), std::invalid_argument);
  NoiseModel bad;
  bad.readout_p01 = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(Gate::cnot(2, 2), std::invalid_argument);
}

}  // namespace
}  // namespace dmftqsim
