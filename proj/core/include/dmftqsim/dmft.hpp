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
#include <ostream>
#include <string>
#include <vector>

#include "dmftqsim/analysis.hpp"
#include "dmftqsim/greens.hpp"
#include "dmftqsim/ground_state.hpp"
#include "dmftqsim/mitigation.hpp"

namespace dmftqsim {

enum class ZMethod { Derivative, Spectral, KramersKronig, Matsubara };
enum class SolverKind { Sampled, ExactTrotter, ExactUnitary };

std::string z_method_name(ZMethod m);
ZMethod parse_z_method(const std::string& s);
std::string solver_name(SolverKind s);
SolverKind parse_solver(const std::string& s);

struct DmftConfig {
  double u = 8.0;
  double v_initial = 1.0;
  double dt = 0.5;
  int n_steps = 6;
  std::uint64_t shots = 8192;
  NoiseModel noise;
  bool readout_mitigation = false;
  bool zne = false;
  std::vector<int> folds{0, 1, 2};
  std::uint64_t calibration_shots = 65536;
  ZMethod z_method = ZMethod::Spectral;
  SolverKind solver = SolverKind::ExactUnitary;
  double v_tolerance = 1e-3;
  double v_cutoff = 1e-2;
  int max_iterations = 50;
  double mixing = 0.0;
  std::uint64_t seed = 0;
  GridOptions grid;
  double peak_floor = 0.02;
  std::vector<double> temperatures = default_temperature_grid();
  VariationalOptions variational;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// One pass through the loop.
struct DmftRecord {
  int iteration = 0;
  double v_in = 0.0;
  FitParams fit;
  ZEstimate z;
  double v_out = 0.0;   // sqrt(Z), before mixing
  double v_next = 0.0;  // after mixing and the cutoff snap
  bool snapped = false;
  double prep_fidelity = 1.0;
  std::string flags;
};

struct DmftTrace {
  std::vector<DmftRecord> records;
  bool converged = false;
  double final_v = 0.0;
  std::optional<ReadoutCalibration> calibration;
};

/// Solves the impurity problem at hybridization v, fits, estimates Z and
/// returns the updated hybridization. `calibration` is required when readout
/// mitigation is on.
DmftRecord dmft_iterate(const DmftConfig& config, double v_current, std::uint64_t seed,
                        const std::optional<ReadoutCalibration>& calibration = std::nullopt,
                        int iteration = 1);

/// The impurity Green's function used by one iteration (exposed for tools).
GreensSeries solve_impurity(const DmftConfig& config, const AimParameters& p,
                            const PreparedState& prep, std::uint64_t seed,
                            const std::optional<ReadoutCalibration>& calibration);

/// Z by the configured method for a fit at hybridization v.
ZEstimate estimate_z(const DmftConfig& config, const FitParams& fit, double v);

/// Iterates until |V_next - V| < v_tolerance or max_iterations. Values below
/// v_cutoff snap to 0, which forces one confirming iteration at V = 0.
DmftTrace run_to_self_consistency(const DmftConfig& config);

/// dmft_history.csv.
void write_history_csv(std::ostream& out, const DmftTrace& trace);

}  // namespace dmftqsim
