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

#include "dmftqsim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dmftqsim {

AimParameters AimParameters::half_filled(double u, double v, double mu) {
  AimParameters p;
  p.u = u;
  p.v = v;
  p.mu = mu;
  p.eps0 = mu + u / 2.0;
  p.eps1 = mu;
  return p;
}

bool AimParameters::half_filling(double tol) const {
  return std::abs((eps0 - mu) - u / 2.0) <= tol && std::abs(eps1 - mu) <= tol;
}

void AimParameters::validate() const {
  for (double x : {u, v, eps0, eps1, mu}) {
    if (!std::isfinite(x)) throw std::invalid_argument("AimParameters: non-finite field");
  }
  if (v < 0.0) throw std::invalid_argument("AimParameters: hybridization v must be >= 0");
}

char axis_name(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

void PauliTerm::validate(int n_qubits) const {
  if (!std::isfinite(coefficient)) throw std::invalid_argument("PauliTerm: non-finite coefficient");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].qubit < 1 || factors[i].qubit > n_qubits) {
      throw std::invalid_argument("PauliTerm: qubit index out of range");
    }
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      if (factors[i].qubit == factors[j].qubit) {
        throw std::invalid_argument("PauliTerm: repeated qubit index");
      }
    }
  }
}

std::string PauliTerm::to_string() const {
  std::ostringstream os;
  os << coefficient;
  for (const auto& f : factors) os << ' ' << axis_name(f.axis) << f.qubit;
  return os.str();
}

int jw_qubit(Site site, Spin spin) {
  const int orbital = site == Site::Impurity ? 1 : 2;
  return spin == Spin::Down ? orbital : orbital + 2;
}

std::array<WeightedPauliString, 2> jw_operator(const FermionOperator& f) {
  const int k = jw_qubit(f.site, f.spin);
  std::vector<PauliFactor> tail;
  for (int q = 1; q < k; ++q) tail.push_back({q, Axis::Z});

  auto with = [&](Axis a) {
    auto fs = tail;
    fs.push_back({k, a});
    return fs;
  };
  const Complex wy = f.dagger ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
  return {WeightedPauliString{Complex(0.5, 0.0), with(Axis::X)},
          WeightedPauliString{wy, with(Axis::Y)}};
}

std::vector<PauliTerm> build_aim_pauli_hamiltonian(const AimParameters& p) {
  const double impurity_z = (p.eps0 - p.mu) / 2.0 - p.u / 4.0;
  const double bath_z = -(p.eps1 - p.mu) / 2.0;
  const double hop = p.v / 2.0;

  std::vector<PauliTerm> candidates = {
      {p.u / 4.0, {{1, Axis::Z}, {3, Axis::Z}}},
      {impurity_z, {{1, Axis::Z}}},
      {impurity_z, {{3, Axis::Z}}},
      {bath_z, {{2, Axis::Z}}},
      {bath_z, {{4, Axis::Z}}},
      {hop, {{1, Axis::X}, {2, Axis::X}}},
      {hop, {{1, Axis::Y}, {2, Axis::Y}}},
      {hop, {{3, Axis::X}, {4, Axis::X}}},
      {hop, {{3, Axis::Y}, {4, Axis::Y}}},
  };
  std::vector<PauliTerm> terms;
  for (auto& t : candidates) {
    if (t.coefficient != 0.0) terms.push_back(std::move(t));
  }
  return terms;
}

double fermionic_energy_offset(const AimParameters& p) {
  return p.u / 4.0 - (p.eps0 - p.mu) + (p.eps1 - p.mu);
}

namespace {

Eigen::Matrix2cd single_pauli(Axis a) {
  Eigen::Matrix2cd m;
  switch (a) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

Eigen::MatrixXcd pauli_string_matrix(std::span<const PauliFactor> factors, int n_qubits) {
  // Pauli strings are monomial: each column has exactly one nonzero entry.
  const int dim = 1 << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    int row = col;
    Complex amp(1.0, 0.0);
    for (const auto& f : factors) {
      const int bit = (col >> (f.qubit - 1)) & 1;
      const Eigen::Matrix2cd s = single_pauli(f.axis);
      const int out = f.axis == Axis::Z ? bit : 1 - bit;
      amp *= s(out, bit);
      if (out != bit) row ^= 1 << (f.qubit - 1);
    }
    m(row, col) = amp;
  }
  return m;
}

Eigen::MatrixXcd pauli_sum_matrix(std::span<const PauliTerm> terms, int n_qubits) {
  const int dim = 1 << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms) m += t.coefficient * pauli_string_matrix(t.factors, n_qubits);
  return m;
}

Eigen::MatrixXcd weighted_pauli_matrix(std::span<const WeightedPauliString> strings,
                                       int n_qubits) {
  const int dim = 1 << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& s : strings) m += s.weight * pauli_string_matrix(s.factors, n_qubits);
  return m;
}

Eigen::MatrixXcd aim_matrix(const AimParameters& p) {
  const auto terms = build_aim_pauli_hamiltonian(p);
  return pauli_sum_matrix(terms, kSystemQubits);
}

Eigen::MatrixXcd fermion_matrix(const FermionOperator& f, int n_qubits) {
  const auto pair = jw_operator(f);
  return weighted_pauli_matrix(pair, n_qubits);
}

Eigen::MatrixXcd unitary_evolution(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace dmftqsim
