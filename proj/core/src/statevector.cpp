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

#include "dmftqsim/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace dmftqsim {

namespace {

const Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli2(int which) {
  Eigen::Matrix2cd m;
  switch (which) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m = Eigen::Matrix2cd::Identity(); break;
  }
  return m;
}

Eigen::Matrix2cd axis_matrix(Axis a) {
  return pauli2(a == Axis::X ? 1 : a == Axis::Y ? 2 : 3);
}

template <typename Mat>
void left_single(Mat& m, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index mask = Eigen::Index{1} << (q - 1);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i & mask) continue;
      const Complex a = m(i, c), b = m(i | mask, c);
      m(i, c) = u(0, 0) * a + u(0, 1) * b;
      m(i | mask, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

// m -> m * u^dagger acting on the column index.
void right_single_adjoint(Eigen::MatrixXcd& m, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index mask = Eigen::Index{1} << (q - 1);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j & mask) continue;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex a = m(r, j), b = m(r, j | mask);
      m(r, j) = std::conj(u(0, 0)) * a + std::conj(u(0, 1)) * b;
      m(r, j | mask) = std::conj(u(1, 0)) * a + std::conj(u(1, 1)) * b;
    }
  }
}

std::array<Eigen::Index, 4> pair_indices(Eigen::Index base, Eigen::Index ma, Eigen::Index mb) {
  return {base, base | mb, base | ma, base | ma | mb};
}

template <typename Mat>
void left_pair(Mat& m, int qa, int qb, const Eigen::Matrix4cd& u) {
  const Eigen::Index ma = Eigen::Index{1} << (qa - 1);
  const Eigen::Index mb = Eigen::Index{1} << (qb - 1);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if ((i & ma) || (i & mb)) continue;
      const auto idx = pair_indices(i, ma, mb);
      Eigen::Vector4cd v;
      for (int k = 0; k < 4; ++k) v[k] = m(idx[k], c);
      const Eigen::Vector4cd w = u * v;
      for (int k = 0; k < 4; ++k) m(idx[k], c) = w[k];
    }
  }
}

void right_pair_adjoint(Eigen::MatrixXcd& m, int qa, int qb, const Eigen::Matrix4cd& u) {
  const Eigen::Index ma = Eigen::Index{1} << (qa - 1);
  const Eigen::Index mb = Eigen::Index{1} << (qb - 1);
  const Eigen::Matrix4cd uc = u.conjugate();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if ((j & ma) || (j & mb)) continue;
    const auto idx = pair_indices(j, ma, mb);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Eigen::Vector4cd v;
      for (int k = 0; k < 4; ++k) v[k] = m(r, idx[k]);
      const Eigen::Vector4cd w = uc * v;
      for (int k = 0; k < 4; ++k) m(r, idx[k]) = w[k];
    }
  }
}

}  // namespace

// --- Gate -------------------------------------------------------------------

Gate Gate::ry(int q, double theta) { return Gate{GateKind::Ry, q, 0, theta}; }
Gate Gate::rz(int q, double theta) { return Gate{GateKind::Rz, q, 0, theta}; }
Gate Gate::h(int q) { return Gate{GateKind::H, q}; }
Gate Gate::x(int q) { return Gate{GateKind::X, q}; }
Gate Gate::y(int q) { return Gate{GateKind::Y, q}; }
Gate Gate::z(int q) { return Gate{GateKind::Z, q}; }
Gate Gate::s(int q) { return Gate{GateKind::S, q}; }
Gate Gate::sdg(int q) { return Gate{GateKind::Sdg, q}; }

Gate Gate::cnot(int control, int target) {
  if (control == target) throw std::invalid_argument("CNOT: control equals target");
  return Gate{GateKind::CNOT, control, target};
}

Gate Gate::controlled_pauli(int control, int target, Axis axis, int control_value) {
  if (control == target) throw std::invalid_argument("ControlledPauli: control equals target");
  if (control_value != 0 && control_value != 1) {
    throw std::invalid_argument("ControlledPauli: control_value must be 0 or 1");
  }
  Gate g{GateKind::ControlledPauli, control, target};
  g.axis = axis;
  g.control_value = control_value;
  return g;
}

Gate Gate::two_qubit(int qa, int qb, const Eigen::Matrix4cd& m) {
  if (qa == qb) throw std::invalid_argument("TwoQubitUnitary: repeated qubit");
  if (!(m * m.adjoint()).isIdentity(1e-10)) {
    throw std::invalid_argument("TwoQubitUnitary: matrix is not unitary");
  }
  Gate g{GateKind::TwoQubitUnitary, qa, qb};
  g.matrix = m;
  return g;
}

bool Gate::is_two_qubit() const {
  return kind == GateKind::CNOT || kind == GateKind::ControlledPauli ||
         kind == GateKind::TwoQubitUnitary;
}

std::string Gate::name() const {
  switch (kind) {
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::CNOT: return "CNOT";
    case GateKind::ControlledPauli:
      return fmt::format("C{}{}", control_value, axis_name(axis));
    case GateKind::TwoQubitUnitary: return "U4";
  }
  return "?";
}

Eigen::Matrix2cd Gate::single_matrix() const {
  Eigen::Matrix2cd m;
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  const double r = std::numbers::sqrt2 / 2.0;
  switch (kind) {
    case GateKind::Ry: m << c, -s, s, c; break;
    case GateKind::Rz: m << Complex(c, -s), 0, 0, Complex(c, s); break;
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: m = pauli2(1); break;
    case GateKind::Y: m = pauli2(2); break;
    case GateKind::Z: m = pauli2(3); break;
    case GateKind::S: m << 1, 0, 0, kI; break;
    case GateKind::Sdg: m << 1, 0, 0, -kI; break;
    default: throw std::logic_error("single_matrix called on a two-qubit gate");
  }
  return m;
}

Eigen::Matrix4cd Gate::pair_matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  switch (kind) {
    case GateKind::CNOT:
      m(0, 0) = m(1, 1) = 1.0;
      m(2, 3) = m(3, 2) = 1.0;
      break;
    case GateKind::ControlledPauli: {
      const int off = 2 * control_value;
      const int idle = 2 * (1 - control_value);
      m(idle, idle) = m(idle + 1, idle + 1) = 1.0;
      m.block<2, 2>(off, off) = axis_matrix(axis);
      break;
    }
    case GateKind::TwoQubitUnitary: m = matrix; break;
    default: throw std::logic_error("pair_matrix called on a single-qubit gate");
  }
  return m;
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::Ry:
    case GateKind::Rz: g.angle = -angle; break;
    case GateKind::S: g.kind = GateKind::Sdg; break;
    case GateKind::Sdg: g.kind = GateKind::S; break;
    case GateKind::TwoQubitUnitary: g.matrix = matrix.adjoint(); break;
    default: break;  // self-inverse
  }
  return g;
}

void Gate::check_qubits(int n_qubits) const {
  auto bad = [&](int q) { return q < 1 || q > n_qubits; };
  if (bad(q0) || (is_two_qubit() && bad(q1))) {
    throw std::out_of_range(
        fmt::format("gate {} on qubit(s) {},{} outside a {}-qubit register", name(), q0, q1,
                    n_qubits));
  }
}

// --- QuantumState -------------------------------------------------------------

QuantumState QuantumState::zero(int n_qubits, StateMode mode) {
  if (n_qubits < 1 || n_qubits > 12) throw std::invalid_argument("QuantumState: bad qubit count");
  QuantumState s(n_qubits, mode);
  const int d = 1 << n_qubits;
  if (mode == StateMode::Pure) {
    s.psi_ = Eigen::VectorXcd::Zero(d);
    s.psi_[0] = 1.0;
  } else {
    s.rho_ = Eigen::MatrixXcd::Zero(d, d);
    s.rho_(0, 0) = 1.0;
  }
  return s;
}

namespace {

int qubits_for_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if ((Eigen::Index{1} << n) != d || n < 1) {
    throw std::invalid_argument("QuantumState: dimension is not a power of two");
  }
  return n;
}

}  // namespace

QuantumState QuantumState::from_vector(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-8) throw std::invalid_argument("QuantumState: vector not normalized");
  QuantumState s(qubits_for_dim(psi.size()), StateMode::Pure);
  s.psi_ = psi;
  return s;
}

QuantumState QuantumState::from_density(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("QuantumState: density not square");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-8) {
    throw std::invalid_argument("QuantumState: density trace is not 1");
  }
  QuantumState s(qubits_for_dim(rho.rows()), StateMode::Density);
  s.rho_ = rho;
  return s;
}

const Eigen::VectorXcd& QuantumState::vector() const {
  if (mode_ != StateMode::Pure) throw std::logic_error("QuantumState: not a pure state");
  return psi_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
  if (mode_ != StateMode::Density) throw std::logic_error("QuantumState: not a density state");
  return rho_;
}

Eigen::VectorXcd& QuantumState::mutable_vector() {
  if (mode_ != StateMode::Pure) throw std::logic_error("QuantumState: not a pure state");
  return psi_;
}

Eigen::MatrixXcd& QuantumState::mutable_density() {
  if (mode_ != StateMode::Density) throw std::logic_error("QuantumState: not a density state");
  return rho_;
}

QuantumState QuantumState::to_density() const {
  if (mode_ == StateMode::Density) return *this;
  QuantumState s(n_, StateMode::Density);
  s.rho_ = psi_ * psi_.adjoint();
  return s;
}

Eigen::VectorXd QuantumState::probabilities() const {
  if (mode_ == StateMode::Pure) return psi_.cwiseAbs2();
  return rho_.diagonal().real();
}

QuantumState QuantumState::extended(int extra) const {
  QuantumState s(n_ + extra, mode_);
  const Eigen::Index d = dim(), big = Eigen::Index{1} << (n_ + extra);
  if (mode_ == StateMode::Pure) {
    s.psi_ = Eigen::VectorXcd::Zero(big);
    s.psi_.head(d) = psi_;
  } else {
    s.rho_ = Eigen::MatrixXcd::Zero(big, big);
    s.rho_.topLeftCorner(d, d) = rho_;
  }
  return s;
}

void QuantumState::apply_single(int q, const Eigen::Matrix2cd& u) {
  if (mode_ == StateMode::Pure) {
    left_single(psi_, q, u);
  } else {
    left_single(rho_, q, u);
    right_single_adjoint(rho_, q, u);
  }
}

void QuantumState::apply_pair(int qa, int qb, const Eigen::Matrix4cd& u) {
  if (mode_ == StateMode::Pure) {
    left_pair(psi_, qa, qb, u);
  } else {
    left_pair(rho_, qa, qb, u);
    right_pair_adjoint(rho_, qa, qb, u);
  }
}

void QuantumState::apply_gate(const Gate& g) {
  g.check_qubits(n_);
  if (g.is_two_qubit()) {
    apply_pair(g.q0, g.q1, g.pair_matrix());
  } else {
    apply_single(g.q0, g.single_matrix());
  }
}

// --- Noise ------------------------------------------------------------------

void NoiseModel::validate() const {
  for (double p : {two_qubit_depolarizing, readout_p01, readout_p10}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("NoiseModel: probability outside [0,1]");
  }
}

void depolarizing_channel(QuantumState& state, int qa, int qb, double epsilon) {
  if (state.mode() != StateMode::Density) {
    throw std::invalid_argument("depolarizing_channel: requires a density state");
  }
  if (qa == qb) throw std::invalid_argument("depolarizing_channel: repeated qubit");
  if (epsilon == 0.0) return;
  Eigen::MatrixXcd& rho = state.mutable_density();
  const Eigen::Index ma = Eigen::Index{1} << (qa - 1);
  const Eigen::Index mb = Eigen::Index{1} << (qb - 1);
  const Eigen::Index d = rho.rows();
  // (Tr_pair rho (x) I/4)_{ij} is nonzero only when i and j agree on the pair.
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if ((i & ma) || (i & mb)) continue;
    const auto ii = pair_indices(i, ma, mb);
    for (Eigen::Index j = 0; j < d; ++j) {
      if ((j & ma) || (j & mb)) continue;
      const auto jj = pair_indices(j, ma, mb);
      Complex sum = 0.0;
      for (int k = 0; k < 4; ++k) sum += rho(ii[k], jj[k]);
      for (int k = 0; k < 4; ++k) mixed(ii[k], jj[k]) = 0.25 * sum;
    }
  }
  rho = (1.0 - epsilon) * rho + epsilon * mixed;
}

void global_depolarizing_channel(QuantumState& state, double epsilon) {
  if (state.mode() != StateMode::Density) {
    throw std::invalid_argument("global_depolarizing_channel: requires a density state");
  }
  Eigen::MatrixXcd& rho = state.mutable_density();
  const double d = static_cast<double>(rho.rows());
  rho *= (1.0 - epsilon);
  rho.diagonal().array() += epsilon / d;
}

namespace {

// A uniformly random Pauli on the affected qubits (identity included) with
// probability epsilon; averaging reproduces the depolarizing channel.
void trajectory_kick(QuantumState& state, const Gate& g, const NoiseModel& noise, Rng& rng) {
  if (!rng.bernoulli(noise.two_qubit_depolarizing)) return;
  if (noise.scope == NoiseScope::Local) {
    const auto p = rng.below(16);
    if (p / 4) state.apply_single(g.q0, pauli2(static_cast<int>(p / 4)));
    if (p % 4) state.apply_single(g.q1, pauli2(static_cast<int>(p % 4)));
  } else {
    for (int q = 1; q <= state.n_qubits(); ++q) {
      const auto p = rng.below(4);
      if (p) state.apply_single(q, pauli2(static_cast<int>(p)));
    }
  }
}

}  // namespace

void apply_circuit(QuantumState& state, std::span<const Gate> gates, const NoiseModel& noise,
                   Rng* rng) {
  noise.validate();
  for (const auto& g : gates) g.check_qubits(state.n_qubits());

  const bool trajectory = state.mode() == StateMode::Pure && noise.has_gate_noise();
  std::optional<Rng> owned;
  if (trajectory && rng == nullptr) {
    if (!noise.seed) {
      throw std::invalid_argument("apply_circuit: pure-state noise needs an rng or a seed");
    }
    owned.emplace(*noise.seed);
    rng = &*owned;
  }

  for (const auto& g : gates) {
    state.apply_gate(g);
    if (!g.is_two_qubit() || !noise.has_gate_noise()) continue;
    if (trajectory) {
      trajectory_kick(state, g, noise, *rng);
    } else if (noise.scope == NoiseScope::Local) {
      depolarizing_channel(state, g.q0, g.q1, noise.two_qubit_depolarizing);
    } else {
      global_depolarizing_channel(state, noise.two_qubit_depolarizing);
    }
  }
}

double pauli_expectation(const QuantumState& state, std::span<const PauliFactor> factors) {
  for (const auto& f : factors) {
    if (f.qubit < 1 || f.qubit > state.n_qubits()) {
      throw std::out_of_range("pauli_expectation: qubit outside register");
    }
  }
  // P|i> = a(i) |r(i)>.
  Complex total = 0.0;
  const Eigen::Index d = state.dim();
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index r = i;
    Complex a(1.0, 0.0);
    for (const auto& f : factors) {
      const Eigen::Index mask = Eigen::Index{1} << (f.qubit - 1);
      const bool one = i & mask;
      switch (f.axis) {
        case Axis::X: r ^= mask; break;
        case Axis::Y: r ^= mask; a *= one ? -kI : kI; break;
        case Axis::Z: if (one) a = -a; break;
      }
    }
    if (state.mode() == StateMode::Pure) {
      total += std::conj(state.vector()[r]) * a * state.vector()[i];
    } else {
      total += state.density()(i, r) * a;
    }
  }
  return total.real();
}

double rotated_one_probability(const QuantumState& state, int qubit, Basis basis) {
  QuantumState s = state;
  if (basis == Basis::Y) s.apply_gate(Gate::sdg(qubit));
  if (basis != Basis::Z) s.apply_gate(Gate::h(qubit));
  const Eigen::VectorXd p = s.probabilities();
  const Eigen::Index mask = Eigen::Index{1} << (qubit - 1);
  double one = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i & mask) one += p[i];
  }
  return std::clamp(one, 0.0, 1.0);
}

double sample_from_probability(double p_one, std::uint64_t shots, const NoiseModel& noise,
                               Rng& rng) {
  if (shots == 0) throw std::invalid_argument("sampling requires shots > 0");
  std::int64_t balance = 0;
  const bool readout = noise.has_readout_noise();
  for (std::uint64_t k = 0; k < shots; ++k) {
    bool one = rng.uniform() < p_one;
    if (readout) {
      if (!one && rng.uniform() < noise.readout_p01) {
        one = true;
      } else if (one && rng.uniform() < noise.readout_p10) {
        one = false;
      }
    }
    balance += one ? -1 : 1;
  }
  return static_cast<double>(balance) / static_cast<double>(shots);
}

double sample_expectation(const QuantumState& state, Basis basis, std::uint64_t shots,
                          const NoiseModel& noise, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("sample_expectation: shots must be positive");
  noise.validate();
  const int ancilla = std::min(kAncillaQubit, state.n_qubits());
  Rng rng(seed);
  return sample_from_probability(rotated_one_probability(state, ancilla, basis), shots, noise,
                                 rng);
}

}  // namespace dmftqsim
