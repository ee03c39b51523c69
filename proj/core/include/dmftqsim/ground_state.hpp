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

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dmftqsim/circuits.hpp"
#include "dmftqsim/model.hpp"

namespace dmftqsim {

/// Lowest eigenpair. `energy` is the fermionic model energy, i.e. the qubit
/// eigenvalue plus fermionic_energy_offset().
struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd vector;  // 16 entries, unit norm
  int degeneracy = 1;
};

/// Exact ground state of aim_matrix(p). Degenerate manifolds are resolved by
/// projecting the spin-symmetric reference (|0110> + |1001>)/sqrt(2) (bits
/// written q1 q2 q3 q4) onto the manifold, falling back to the first basis
/// state with a nonzero projection. The overall phase is fixed so that the
/// largest component is real and positive.
GroundState exact_ground_state(const AimParameters& p);

/// The spin-symmetric reference state above.
Eigen::VectorXcd atomic_reference_state();

/// Ansatz angles preparing atomic_reference_state() exactly.
std::array<double, 8> atomic_limit_angles();

/// |0000> evolved by ansatz_circuit(thetas), as a 16-entry vector.
Eigen::VectorXcd ansatz_state(std::span<const double> thetas);

/// |<a|b>|^2. Throws std::invalid_argument on size mismatch or zero norm.
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct VariationalOptions {
  double tolerance = 1e-10;  // target 1 - fidelity
  int max_evals = 20000;
  int max_restarts = 32;
  std::uint64_t seed = 0;
};

struct VariationalResult {
  std::array<double, 8> thetas{};
  double energy = 0.0;  // fermionic
  double fidelity = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
  // Lowest energy seen after each restart.
  std::vector<double> best_energy_by_restart;
};

/// BFGS over the 8 angles with exact parameter-shift gradients, restarted
/// from seeded uniform angles in [-pi, pi] until 1 - fidelity <= tolerance or
/// the evaluation budget is spent. Returns the highest-fidelity candidate
/// (earliest restart on ties), flagged non-converged if the target was missed.
VariationalResult optimize_ansatz(const AimParameters& p, const VariationalOptions& opts = {});

struct PreparedState {
  Circuit circuit;          // acts on qubits 1..4
  Eigen::VectorXcd vector;  // 16 entries
  VariationalResult result;
  bool exact_path = false;
};

/// Variational preparation, or the exact atomic-limit circuit when
/// p.v < v_cutoff.
PreparedState prepare_ground_state(const AimParameters& p, double v_cutoff,
                                   const VariationalOptions& opts = {});

}  // namespace dmftqsim
