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
#include <functional>
#include <vector>

#include "dmftqsim/circuits.hpp"
#include "dmftqsim/statevector.hpp"

namespace dmftqsim {

/// Ancilla assignment probabilities. p01 = P(read 1 | prepared 0),
/// p10 = P(read 0 | prepared 1). Under this channel a true <Z> = z reads as
///   (1 - p01 - p10) z + (p10 - p01).
struct ReadoutCalibration {
  double p01 = 0.0;
  double p10 = 0.0;
  std::uint64_t shots = 0;

  double contrast() const { return 1.0 - p01 - p10; }
};

/// Estimates p01 and p10 by preparing the ancilla in |0> and |1> and
/// sampling `shots` readouts of each. Throws std::invalid_argument if
/// shots < 1024 or the estimated contrast is within 5 standard errors of zero.
ReadoutCalibration calibrate_readout(const NoiseModel& noise, std::uint64_t shots,
                                     std::uint64_t seed);

/// The forward assignment model above.
double apply_readout_model(double z, const ReadoutCalibration& cal);

/// Inverts the assignment channel and clamps to [-1, 1]; `clamped` (if
/// given) reports whether clamping happened. Throws std::invalid_argument on
/// non-positive contrast.
double correct_readout(double raw_z, const ReadoutCalibration& cal, bool* clamped = nullptr);

/// Exponential fit y_k = A r^k, r = 1 - decay, shared by one or more
/// observables measured at the same fold counts.
struct ExtrapolationFit {
  std::vector<int> folds;
  std::vector<std::vector<double>> raw;  // [observable][fold index]
  std::vector<double> amplitude;         // A per observable
  double decay = 0.0;                    // estimated epsilon-hat = 1 - r
  double base_folds = 0.0;               // m0, base circuit in units of folds
  std::vector<double> extrapolated;      // raw_0 / r^m0 per observable
  bool decay_out_of_range = false;       // r outside (0, 1]; extrapolated = raw_0

  double fitted(std::size_t observable, int k) const;
};

/// Least-squares fit of the common decay. `m0` converts the base circuit's
/// two-qubit gate count into fold units. Requires >= 3 distinct folds
/// including 0; throws std::invalid_argument otherwise.
ExtrapolationFit fit_exponential_decay(const std::vector<int>& folds,
                                       const std::vector<std::vector<double>>& raw, double m0);

/// Builds the circuit for fold count k.
using FoldedCircuitFamily = std::function<Circuit(int k)>;

/// One noisy identity: the circuit followed by its exact inverse.
Circuit noisy_identity(const Circuit& unit);

/// Zero-noise extrapolation of one ancilla observable. Each family member
/// is simulated in density mode under `noise`; with shots == 0 the exact
/// expectation is used, otherwise `shots` readouts are sampled.
ExtrapolationFit zero_noise_extrapolate(const FoldedCircuitFamily& family,
                                        const std::vector<int>& folds, Basis observable,
                                        std::uint64_t shots, const NoiseModel& noise,
                                        std::uint64_t seed);

/// m0 for a family: two-qubit gates of family(0) divided by the two-qubit
/// gates one fold adds. Zero when folds add no two-qubit gates.
double base_fold_units(const FoldedCircuitFamily& family);

}  // namespace dmftqsim
