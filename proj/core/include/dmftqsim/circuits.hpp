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

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmftqsim/model.hpp"
#include "dmftqsim/statevector.hpp"

namespace dmftqsim {

/// Ordered gate list. The first gate in `gates` acts first.
struct Circuit {
  int n_qubits = kTotalQubits;
  std::vector<Gate> gates;

  int two_qubit_count() const;
  bool empty() const { return gates.empty(); }

  Circuit& add(const Gate& g);
  Circuit& append(const Circuit& other);

  /// Reversed order, each gate inverted.
  Circuit inverse() const;

  /// Highest qubit index touched (0 for an empty circuit).
  int max_qubit() const;

  /// Line-oriented text form: one gate per line, "NAME q [q2] [angle]".
  std::string dump() const;
};

/// Fig.-2-style ansatz on qubits 1..4 with 3 CNOTs. Requires exactly 8 angles.
Circuit ansatz_circuit(std::span<const double> thetas);

/// exp(-i theta (XX + YY) / 2) on (qa, qb) up to a global phase, using
/// three CNOTs.
Circuit xxyy_block(double theta, int qa, int qb);

/// exp(-i theta Z_a Z_b / 2) as CNOT, Rz(theta), CNOT.
Circuit zz_block(double theta, int qa, int qb);

/// One first-order Trotter step of the qubit Hamiltonian over time dt, with
/// terms applied in this order: hopping (1,2), hopping (3,4), Z1 Z3, then the
/// single-qubit Z terms on qubits 1, 3, 2, 4. Terms with zero coefficient
/// emit no gates. Requires dt > 0.
Circuit trotter_step_circuit(const AimParameters& p, double dt);

/// Dense 16x16 oracle for the same product of exact term exponentials.
Eigen::MatrixXcd trotter_step_matrix(const AimParameters& p, double dt);

/// n_steps copies of trotter_step_circuit; the empty circuit for n_steps == 0.
Circuit trotterized_evolution(const AimParameters& p, int n_steps, double dt);

/// Single-ancilla interferometry wrapper: prep, H on the ancilla,
/// controlled-alpha on qubit 1 (ancilla in |0>), evolution, controlled-beta on
/// qubit 1 (ancilla in |1>). Afterwards <X_A> + i <Y_A> equals
/// <psi| alpha_1 U^dagger beta_1 U |psi>.
Circuit interferometry_circuit(const Circuit& prep, const Circuit& evolution, Axis alpha,
                               Axis beta);

/// Dense unitary of a circuit on n_qubits.
Eigen::MatrixXcd circuit_matrix(const Circuit& c, int n_qubits);

inline void apply_circuit(QuantumState& state, const Circuit& c, const NoiseModel& noise = {},
                          Rng* rng = nullptr) {
  apply_circuit(state, std::span<const Gate>(c.gates), noise, rng);
}

}  // namespace dmftqsim
