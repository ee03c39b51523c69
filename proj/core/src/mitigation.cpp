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

#include "dmftqsim/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "dmftqsim/rng.hpp"

namespace dmftqsim {

ReadoutCalibration calibrate_readout(const NoiseModel& noise, std::uint64_t shots,
                                     std::uint64_t seed) {
  if (shots < 1024) throw std::invalid_argument("calibrate_readout: needs at least 1024 shots");
  noise.validate();
  Rng rng0(derive_seed(seed, {0}));
  Rng rng1(derive_seed(seed, {1}));
  const double z0 = sample_from_probability(0.0, shots, noise, rng0);
  const double z1 = sample_from_probability(1.0, shots, noise, rng1);
  ReadoutCalibration cal{(1.0 - z0) / 2.0, (1.0 + z1) / 2.0, shots};
  // A contrast within 5 sigma of zero cannot be told apart from a dead channel.
  const double n = static_cast<double>(shots);
  const double sigma = std::sqrt((cal.p01 * (1 - cal.p01) + cal.p10 * (1 - cal.p10)) / n);
  if (!(cal.contrast() > 5.0 * sigma)) {
    throw std::invalid_argument("calibrate_readout: readout contrast indistinguishable from zero");
  }
  return cal;
}

double apply_readout_model(double z, const ReadoutCalibration& cal) {
  return cal.contrast() * z + (cal.p10 - cal.p01);
}

double correct_readout(double raw_z, const ReadoutCalibration& cal, bool* clamped) {
  if (!(cal.contrast() > 0.0)) throw std::invalid_argument("correct_readout: contrast must be > 0");
  const double z = (raw_z - (cal.p10 - cal.p01)) / cal.contrast();
  const double c = std::clamp(z, -1.0, 1.0);
  if (clamped != nullptr) *clamped = c != z;
  return c;
}

double ExtrapolationFit::fitted(std::size_t observable, int k) const {
  return amplitude.at(observable) * std::pow(1.0 - decay, k);
}

namespace {

struct DecayObjective {
  const std::vector<int>& folds;
  const std::vector<std::vector<double>>& raw;

  double amplitude(std::size_t j, double r) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      const double rk = std::pow(r, folds[i]);
      num += raw[j][i] * rk;
      den += rk * rk;
    }
    return num / den;
  }

  double sse(double r) const {
    double s = 0.0;
    for (std::size_t j = 0; j < raw.size(); ++j) {
      const double a = amplitude(j, r);
      for (std::size_t i = 0; i < folds.size(); ++i) {
        const double e = raw[j][i] - a * std::pow(r, folds[i]);
        s += e * e;
      }
    }
    return s;
  }

  // d sse / d r with the amplitudes at their optimum.
  double slope(double r) const {
    double g = 0.0;
    for (std::size_t j = 0; j < raw.size(); ++j) {
      const double a = amplitude(j, r);
      for (std::size_t i = 0; i < folds.size(); ++i) {
        const int k = folds[i];
        if (k == 0) continue;
        const double e = raw[j][i] - a * std::pow(r, k);
        g += -2.0 * e * a * k * std::pow(r, k - 1);
      }
    }
    return g;
  }
};

}  // namespace

ExtrapolationFit fit_exponential_decay(const std::vector<int>& folds,
                                       const std::vector<std::vector<double>>& raw, double m0) {
  const std::set<int> distinct(folds.begin(), folds.end());
  if (distinct.size() < 3 || distinct.size() != folds.size()) {
    throw std::invalid_argument("zero-noise extrapolation needs at least 3 distinct fold counts");
  }
  if (!distinct.count(0)) throw std::invalid_argument("zero-noise extrapolation needs fold count 0");
  if (*distinct.begin() < 0) throw std::invalid_argument("fold counts must be nonnegative");
  for (const auto& row : raw) {
    if (row.size() != folds.size()) throw std::invalid_argument("raw/fold size mismatch");
  }
  const std::size_t zero_at = std::find(folds.begin(), folds.end(), 0) - folds.begin();

  ExtrapolationFit fit;
  fit.folds = folds;
  fit.raw = raw;
  fit.base_folds = m0;

  double power = 0.0;
  for (const auto& row : raw) {
    for (double y : row) power += y * y;
  }

  double r = 1.0;
  const DecayObjective obj{folds, raw};
  if (power > 0.0) {
    // Coarse scan, then a root of the slope inside the best bracket.
    constexpr int kScan = 400;
    constexpr double kLo = 1e-3, kHi = 2.0;
    auto at = [&](int i) { return kLo + (kHi - kLo) * i / kScan; };
    int best = 0;
    double best_sse = obj.sse(at(0));
    for (int i = 1; i <= kScan; ++i) {
      const double s = obj.sse(at(i));
      if (s < best_sse) {
        best_sse = s;
        best = i;
      }
    }
    r = at(best);
    const double lo = at(std::max(best - 1, 0)), hi = at(std::min(best + 1, kScan));
    if (obj.slope(lo) < 0.0 && obj.slope(hi) > 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      const auto root = boost::math::tools::toms748_solve(
          [&](double x) { return obj.slope(x); }, lo, hi, tol, iters);
      r = 0.5 * (root.first + root.second);
    }
  }
  if (std::abs(r - 1.0) < 1e-9) r = 1.0;

  fit.decay_out_of_range = !(r > 0.0 && r <= 1.0);
  fit.decay = 1.0 - r;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    fit.amplitude.push_back(power > 0.0 ? obj.amplitude(j, r) : 0.0);
    fit.extrapolated.push_back(fit.decay_out_of_range ? raw[j][zero_at]
                                                      : raw[j][zero_at] / std::pow(r, m0));
  }
  return fit;
}

Circuit noisy_identity(const Circuit& unit) {
  Circuit c{unit.n_qubits, {}};
  c.append(unit);
  c.append(unit.inverse());
  return c;
}

double base_fold_units(const FoldedCircuitFamily& family) {
  const int base = family(0).two_qubit_count();
  const int per_fold = family(1).two_qubit_count() - base;
  return per_fold > 0 ? static_cast<double>(base) / per_fold : 0.0;
}

ExtrapolationFit zero_noise_extrapolate(const FoldedCircuitFamily& family,
                                        const std::vector<int>& folds, Basis observable,
                                        std::uint64_t shots, const NoiseModel& noise,
                                        std::uint64_t seed) {
  std::vector<double> values;
  const ReadoutCalibration model{noise.readout_p01, noise.readout_p10, 0};
  for (std::size_t i = 0; i < folds.size(); ++i) {
    const Circuit c = family(folds[i]);
    auto state = QuantumState::zero(c.n_qubits, StateMode::Density);
    apply_circuit(state, c, noise);
    const double p1 = rotated_one_probability(state, c.n_qubits, observable);
    if (shots == 0) {
      values.push_back(apply_readout_model(1.0 - 2.0 * p1, model));
    } else {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      values.push_back(sample_from_probability(p1, shots, noise, rng));
    }
  }
  return fit_exponential_decay(folds, {values}, base_fold_units(family));
}

}  // namespace dmftqsim
