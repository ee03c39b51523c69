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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmftqsim/circuits.hpp"
#include "dmftqsim/mitigation.hpp"
#include "dmftqsim/model.hpp"
#include "dmftqsim/statevector.hpp"

namespace dmftqsim {

enum class Provenance { Sampled, ExactTrotter, ExactUnitary };

std::string provenance_name(Provenance p);

/// Time-domain impurity Green's function of the spin-down impurity orbital
/// (qubit 1). G>(t) = -i<c(t) c^dagger>, G<(t) = i<c^dagger c(t)>,
/// ig_retarded = Re[i (G> - G<)] for t >= 0.
struct GreensSeries {
  std::vector<double> times;
  std::vector<Complex> g_greater;
  std::vector<Complex> g_lesser;
  std::vector<double> ig_retarded;
  std::vector<double> ig_retarded_imag;  // Im[i (G> - G<)], zero under particle-hole symmetry
  Provenance provenance = Provenance::ExactUnitary;

  std::size_t size() const { return times.size(); }
};

/// The four interferometry values O_ab = <psi| a_1 U^dagger b_1 U |psi>,
/// indexed [a][b] with 0 = X and 1 = Y.
using Interferometry = std::array<std::array<Complex, 2>, 2>;

/// Assembles G>(t) and G<(t) from one time point's interferometry values.
std::pair<Complex, Complex> assemble_greens(const Interferometry& o);

/// Appends one time point to a series.
void push_greens_point(GreensSeries& s, double t, const Interferometry& o);

/// Interferometry values for a state and propagator on the 4 system qubits.
Interferometry interferometry_values(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& u);

/// Exact Green's function of the exact ground state propagated with exp(-iHt).
GreensSeries exact_greens_series(const AimParameters& p, const std::vector<double>& times);

/// The same for an arbitrary initial state.
GreensSeries exact_greens_series(const AimParameters& p, const Eigen::VectorXcd& psi,
                                 const std::vector<double>& times);

/// Dense Trotter oracle: U_k = trotter_step_matrix(p, dt)^k, k = 0..n_steps.
GreensSeries exact_trotter_series(const AimParameters& p, const Eigen::VectorXcd& psi,
                                  int n_steps, double dt);

/// ||exp(-iH n dt) - S(dt)^n||_2 with S the Trotter step matrix.
double trotter_error_bound(const AimParameters& p, int n_steps, double dt);

/// t_k = k dt, k = 0..n_steps.
std::vector<double> time_grid(int n_steps, double dt);

struct LehmannPole {
  double omega;
  double weight;
};

/// Poles of G(omega) for the exact ground state, merged within 1e-8 and
/// sorted by frequency. Weights sum to 1.
std::vector<LehmannPole> lehmann_poles(const AimParameters& p);

struct MitigationOptions {
  bool readout = false;
  bool zne = false;
  std::vector<int> folds{0, 1, 2};
  std::optional<ReadoutCalibration> calibration;
};

struct MeasureOptions {
  std::uint64_t shots = 8192;
  // Use exact ancilla expectations (the infinite-shot limit) instead of
  // sampling. Readout error then enters through its forward model.
  bool exact_expectations = false;
  NoiseModel noise;
  MitigationOptions mitigation;
  std::uint64_t seed = 0;
};

/// Per-time-point diagnostics.
struct MeasurementRecord {
  // Raw ancilla expectations per fold: [a][b][basis X=0, Y=1][fold index].
  std::array<std::array<std::array<std::vector<double>, 2>, 2>, 2> raw;
  std::optional<ExtrapolationFit> zne;
  int readout_clamped = 0;
};

struct MeasuredGreens {
  GreensSeries series;
  std::vector<MeasurementRecord> records;
};

/// Runs the interferometry circuits for k = 0..n_steps on top of `prep`
/// and assembles the series. Circuits are simulated in density mode when
/// the noise model has gate noise. Mitigation, when enabled, corrects each
/// raw expectation for readout error first, then extrapolates the 8 values
/// of each time point with one shared decay.
MeasuredGreens measure_greens_series(const AimParameters& p, const Circuit& prep, int n_steps,
                                     double dt, const MeasureOptions& opts);

/// greens.csv: t, Re G>, Im G>, Re G<, Im G<, iG_ret, provenance.
void write_greens_csv(std::ostream& out, const GreensSeries& s);

}  // namespace dmftqsim
