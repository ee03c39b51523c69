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
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dmftqsim {

using Complex = std::complex<double>;

// Qubit layout, shared by every module:
//   qubit 1: impurity spin-down    qubit 2: bath spin-down
//   qubit 3: impurity spin-up      qubit 4: bath spin-up
//   qubit 5: interferometry ancilla
// Qubit k maps to bit (k - 1) of a basis-state index, so qubit 1 is the
// least-significant bit. An occupied mode is |1>, i.e. n = (1 - Z) / 2.
inline constexpr int kSystemQubits = 4;
inline constexpr int kAncillaQubit = 5;
inline constexpr int kTotalQubits = 5;
inline constexpr int kSystemDim = 1 << kSystemQubits;

/// Physical couplings of the two-site Anderson impurity model, in units of
/// the Bethe-lattice hopping t* = 1.
///
/// The impurity level follows the sign convention of the qubit Hamiltonian:
/// half filling is eps0 - mu = +u/2 and eps1 - mu = 0. The equivalent
/// fermionic impurity level is mu - (eps0 - mu), see fermionic_energy_offset().
struct AimParameters {
  double u = 0.0;
  double v = 0.0;
  double eps0 = 0.0;
  double eps1 = 0.0;
  double mu = 0.0;

  static AimParameters half_filled(double u, double v, double mu = 0.0);

  bool half_filling(double tol = 1e-12) const;

  /// The chemical potential entering the frequency-domain Green's functions,
  /// i.e. mu minus the fermionic impurity level. Equals u/2 at half filling.
  double mu_eff() const { return eps0 - mu; }

  double eps1_minus_mu() const { return eps1 - mu; }

  /// Throws std::invalid_argument on non-finite fields or v < 0.
  void validate() const;
};

enum class Axis { X, Y, Z };

char axis_name(Axis a);

struct PauliFactor {
  int qubit;  // 1-based
  Axis axis;

  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};

struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliFactor> factors;

  /// Throws std::invalid_argument for repeated qubits, out-of-range qubits
  /// or a non-finite coefficient.
  void validate(int n_qubits = kTotalQubits) const;
  std::string to_string() const;
};

enum class Site { Impurity = 1, Bath = 2 };
enum class Spin { Up, Down };

struct FermionOperator {
  Site site;
  Spin spin;
  bool dagger;
};

/// Qubit carrying the given spin-orbital.
int jw_qubit(Site site, Spin spin);

/// One Pauli string with a complex weight.
struct WeightedPauliString {
  Complex weight;
  std::vector<PauliFactor> factors;
};

/// Jordan-Wigner image of a single fermionic operator. The result is the
/// pair  w_x * (Z...Z X_k) + w_y * (Z...Z Y_k)  with w_x = 1/2 and
/// w_y = -i/2 for creation (+i/2 for annihilation).
std::array<WeightedPauliString, 2> jw_operator(const FermionOperator& f);

/// Nonzero terms of the qubit Hamiltonian (identity dropped).
std::vector<PauliTerm> build_aim_pauli_hamiltonian(const AimParameters& p);

/// The constant dropped from the qubit Hamiltonian: the fermionic model
/// energy equals <aim_matrix> + fermionic_energy_offset(p).
double fermionic_energy_offset(const AimParameters& p);

/// Dense matrix of a Pauli string over n_qubits qubits.
Eigen::MatrixXcd pauli_string_matrix(std::span<const PauliFactor> factors, int n_qubits);

Eigen::MatrixXcd pauli_sum_matrix(std::span<const PauliTerm> terms, int n_qubits);

Eigen::MatrixXcd weighted_pauli_matrix(std::span<const WeightedPauliString> strings,
                                       int n_qubits);

/// 16 x 16 Hermitian matrix of the qubit Hamiltonian.
Eigen::MatrixXcd aim_matrix(const AimParameters& p);

/// Fermionic operator as a dense 2^n matrix, built from jw_operator().
Eigen::MatrixXcd fermion_matrix(const FermionOperator& f, int n_qubits = kSystemQubits);

/// exp(-i h t) for Hermitian h, by eigendecomposition.
Eigen::MatrixXcd unitary_evolution(const Eigen::MatrixXcd& h, double t);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& m);

}  // namespace dmftqsim
