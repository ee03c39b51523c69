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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmftqsim/model.hpp"
#include "dmftqsim/rng.hpp"

namespace dmftqsim {

enum class GateKind { Ry, Rz, H, X, Y, Z, S, Sdg, CNOT, ControlledPauli, TwoQubitUnitary };

/// One gate. Qubits are 1-based. For two-qubit gates q0 is the control (or
/// the first qubit of a TwoQubitUnitary) and q1 the target; 4x4 matrices use
/// the local index 2*bit(q0) + bit(q1).
struct Gate {
  GateKind kind = GateKind::X;
  int q0 = 1;
  int q1 = 0;
  double angle = 0.0;
  Axis axis = Axis::X;     // ControlledPauli only
  int control_value = 1;   // ControlledPauli only
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Identity();  // TwoQubitUnitary only

  static Gate ry(int q, double theta);
  static Gate rz(int q, double theta);
  static Gate h(int q);
  static Gate x(int q);
  static Gate y(int q);
  static Gate z(int q);
  static Gate s(int q);
  static Gate sdg(int q);
  static Gate cnot(int control, int target);
  static Gate controlled_pauli(int control, int target, Axis axis, int control_value);
  static Gate two_qubit(int qa, int qb, const Eigen::Matrix4cd& m);

  bool is_two_qubit() const;
  std::string name() const;

  Eigen::Matrix2cd single_matrix() const;
  Eigen::Matrix4cd pair_matrix() const;

  Gate inverse() const;

  /// Throws std::out_of_range if a qubit lies outside 1..n_qubits.
  void check_qubits(int n_qubits) const;
};

enum class StateMode { Pure, Density };

class QuantumState {
 public:
  /// |0...0> on n qubits.
  static QuantumState zero(int n_qubits, StateMode mode = StateMode::Pure);
  static QuantumState from_vector(const Eigen::VectorXcd& psi);
  static QuantumState from_density(const Eigen::MatrixXcd& rho);

  StateMode mode() const { return mode_; }
  int n_qubits() const { return n_; }
  int dim() const { return 1 << n_; }

  const Eigen::VectorXcd& vector() const;
  const Eigen::MatrixXcd& density() const;

  /// Pure state promoted to |psi><psi|; density states are returned unchanged.
  QuantumState to_density() const;

  /// Basis-state probabilities.
  Eigen::VectorXd probabilities() const;

  /// Embeds this state of n qubits into n + extra qubits, new qubits in |0>.
  QuantumState extended(int extra) const;

  void apply_gate(const Gate& g);
  void apply_single(int q, const Eigen::Matrix2cd& u);
  void apply_pair(int qa, int qb, const Eigen::Matrix4cd& u);

  // Low-level mutable access for the noise channels.
  Eigen::VectorXcd& mutable_vector();
  Eigen::MatrixXcd& mutable_density();

 private:
  QuantumState(int n, StateMode mode) : n_(n), mode_(mode) {}
  int n_ = 0;
  StateMode mode_ = StateMode::Pure;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
};

/// Where two-qubit depolarizing noise acts.
///   Local:  on the gate's own qubit pair (the simulator default).
///   Global: rho -> (1 - e) rho + e I/d on the whole register, the white-noise
///           model assumed by zero-noise extrapolation.
enum class NoiseScope { Local, Global };

struct NoiseModel {
  double two_qubit_depolarizing = 0.0;
  double readout_p01 = 0.0;  // P(read 1 | ancilla in 0)
  double readout_p10 = 0.0;  // P(read 0 | ancilla in 1)
  NoiseScope scope = NoiseScope::Local;
  std::optional<std::uint64_t> seed;

  bool has_gate_noise() const { return two_qubit_depolarizing > 0.0; }
  bool has_readout_noise() const { return readout_p01 > 0.0 || readout_p10 > 0.0; }
  void validate() const;
};

/// Applies the gates in order. Density states receive the depolarizing
/// channel after every two-qubit gate. Pure states with gate noise follow a
/// single stochastic trajectory drawn from `rng`, or from noise.seed when rng
/// is null; it is an error to request that with neither.
void apply_circuit(QuantumState& state, std::span<const Gate> gates,
                   const NoiseModel& noise = {}, Rng* rng = nullptr);

/// rho -> (1 - e) rho + e Tr_pair(rho) (x) I/4 on qubits (qa, qb).
void depolarizing_channel(QuantumState& state, int qa, int qb, double epsilon);

/// rho -> (1 - e) rho + e I/d.
void global_depolarizing_channel(QuantumState& state, double epsilon);

/// <P> for a Pauli string (coefficient ignored).
double pauli_expectation(const QuantumState& state, std::span<const PauliFactor> factors);

/// Ancilla measurement basis.
enum class Basis { X, Y, Z };

/// Exact probability that the given qubit reads 1 after rotating it into
/// the Z basis (H for X, S-dagger then H for Y). Readout error not included.
double rotated_one_probability(const QuantumState& state, int qubit, Basis basis);

/// Finite-shot estimate of <B_A> on the ancilla (qubit 5, or the last qubit
/// of a smaller register) with per-shot assignment errors from `noise`.
/// Returns (n0 - n1) / shots. Throws std::invalid_argument for shots == 0.
double sample_expectation(const QuantumState& state, Basis basis, std::uint64_t shots,
                          const NoiseModel& noise, std::uint64_t seed);

/// Shot-level sampler shared by sample_expectation and calibration: draws
/// `shots` outcomes of a qubit with P(1) = p_one and applies readout flips.
double sample_from_probability(double p_one, std::uint64_t shots, const NoiseModel& noise,
                               Rng& rng);

}  // namespace dmftqsim
