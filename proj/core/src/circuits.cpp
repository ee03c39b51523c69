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

#include "dmftqsim/circuits.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace dmftqsim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// exp(-i a P) for a Pauli string P, using P^2 = I.
Eigen::MatrixXcd pauli_exponential(double a, std::initializer_list<PauliFactor> factors) {
  const std::vector<PauliFactor> fs(factors);
  const Eigen::MatrixXcd p = pauli_string_matrix(fs, kSystemQubits);
  return std::cos(a) * Eigen::MatrixXcd::Identity(kSystemDim, kSystemDim) -
         Complex(0.0, std::sin(a)) * p;
}

}  // namespace

int Circuit::two_qubit_count() const {
  return static_cast<int>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_two_qubit(); }));
}

Circuit& Circuit::add(const Gate& g) {
  g.check_qubits(n_qubits);
  gates.push_back(g);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  for (const auto& g : other.gates) add(g);
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit inv{n_qubits, {}};
  inv.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) inv.gates.push_back(it->inverse());
  return inv;
}

int Circuit::max_qubit() const {
  int m = 0;
  for (const auto& g : gates) m = std::max({m, g.q0, g.is_two_qubit() ? g.q1 : 0});
  return m;
}

std::string Circuit::dump() const {
  std::string out;
  for (const auto& g : gates) {
    out += g.name();
    out += fmt::format(" {}", g.q0);
    if (g.is_two_qubit()) out += fmt::format(" {}", g.q1);
    if (g.kind == GateKind::Ry || g.kind == GateKind::Rz) out += fmt::format(" {:.17g}", g.angle);
    out += '\n';
  }
  return out;
}

Circuit ansatz_circuit(std::span<const double> thetas) {
  if (thetas.size() != 8) throw std::invalid_argument("ansatz_circuit: expects exactly 8 angles");
  Circuit c;
  for (int q = 1; q <= 4; ++q) c.add(Gate::ry(q, thetas[q - 1]));
  c.add(Gate::cnot(3, 4));
  c.add(Gate::ry(3, thetas[4]));
  c.add(Gate::ry(4, thetas[5]));
  c.add(Gate::cnot(1, 3));
  c.add(Gate::ry(1, thetas[6]));
  c.add(Gate::ry(3, thetas[7]));
  c.add(Gate::cnot(1, 2));
  return c;
}

Circuit xxyy_block(double theta, int qa, int qb) {
  if (qa == qb) throw std::invalid_argument("xxyy_block: qubits must differ");
  Circuit c;
  c.add(Gate::rz(qb, kHalfPi));
  c.add(Gate::cnot(qb, qa));
  c.add(Gate::rz(qa, -kHalfPi));
  c.add(Gate::ry(qb, theta - kHalfPi));
  c.add(Gate::cnot(qa, qb));
  c.add(Gate::ry(qb, kHalfPi - theta));
  c.add(Gate::cnot(qb, qa));
  c.add(Gate::rz(qa, -kHalfPi));
  return c;
}

Circuit zz_block(double theta, int qa, int qb) {
  if (qa == qb) throw std::invalid_argument("zz_block: qubits must differ");
  Circuit c;
  c.add(Gate::cnot(qa, qb));
  c.add(Gate::rz(qb, theta));
  c.add(Gate::cnot(qa, qb));
  return c;
}

Circuit trotter_step_circuit(const AimParameters& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("trotter_step_circuit: dt must be positive");
  const double impurity_z = (p.eps0 - p.mu) / 2.0 - p.u / 4.0;
  const double bath_z = -(p.eps1 - p.mu) / 2.0;

  Circuit c;
  if (p.v != 0.0) {
    c.append(xxyy_block(p.v * dt, 1, 2));
    c.append(xxyy_block(p.v * dt, 3, 4));
  }
  if (p.u != 0.0) c.append(zz_block(p.u * dt / 2.0, 1, 3));
  const std::pair<int, double> zs[] = {{1, impurity_z}, {3, impurity_z}, {2, bath_z}, {4, bath_z}};
  for (const auto& [q, coef] : zs) {
    if (coef != 0.0) c.add(Gate::rz(q, 2.0 * coef * dt));
  }
  return c;
}

Eigen::MatrixXcd trotter_step_matrix(const AimParameters& p, double dt) {
  const double impurity_z = (p.eps0 - p.mu) / 2.0 - p.u / 4.0;
  const double bath_z = -(p.eps1 - p.mu) / 2.0;
  const double h = p.v / 2.0 * dt;
  // Later factors multiply on the left.
  const Eigen::MatrixXcd factors[] = {
      pauli_exponential(h, {{1, Axis::X}, {2, Axis::X}}),
      pauli_exponential(h, {{1, Axis::Y}, {2, Axis::Y}}),
      pauli_exponential(h, {{3, Axis::X}, {4, Axis::X}}),
      pauli_exponential(h, {{3, Axis::Y}, {4, Axis::Y}}),
      pauli_exponential(p.u / 4.0 * dt, {{1, Axis::Z}, {3, Axis::Z}}),
      pauli_exponential(impurity_z * dt, {{1, Axis::Z}}),
      pauli_exponential(impurity_z * dt, {{3, Axis::Z}}),
      pauli_exponential(bath_z * dt, {{2, Axis::Z}}),
      pauli_exponential(bath_z * dt, {{4, Axis::Z}}),
  };
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(kSystemDim, kSystemDim);
  for (const auto& f : factors) m = f * m;
  return m;
}

Circuit trotterized_evolution(const AimParameters& p, int n_steps, double dt) {
  if (n_steps < 0) throw std::invalid_argument("trotterized_evolution: n_steps must be >= 0");
  Circuit c;
  if (n_steps == 0) return c;
  const Circuit step = trotter_step_circuit(p, dt);
  for (int k = 0; k < n_steps; ++k) c.append(step);
  return c;
}

Circuit interferometry_circuit(const Circuit& prep, const Circuit& evolution, Axis alpha,
                               Axis beta) {
  if (alpha == Axis::Z || beta == Axis::Z) {
    throw std::invalid_argument("interferometry_circuit: alpha and beta must be X or Y");
  }
  if (prep.max_qubit() > kSystemQubits || evolution.max_qubit() > kSystemQubits) {
    throw std::invalid_argument("interferometry_circuit: prep/evolution must not touch the ancilla");
  }
  Circuit c;
  c.append(prep);
  c.add(Gate::h(kAncillaQubit));
  c.add(Gate::controlled_pauli(kAncillaQubit, 1, alpha, 0));
  c.append(evolution);
  c.add(Gate::controlled_pauli(kAncillaQubit, 1, beta, 1));
  return c;
}

Eigen::MatrixXcd circuit_matrix(const Circuit& c, int n_qubits) {
  const int d = 1 << n_qubits;
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < d; ++j) {
    auto s = QuantumState::from_vector(Eigen::VectorXcd::Unit(d, j));
    apply_circuit(s, c);
    m.col(j) = s.vector();
  }
  return m;
}

}  // namespace dmftqsim
