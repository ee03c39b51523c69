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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dmftqsim/greens.hpp"
#include "dmftqsim/ground_state.hpp"
#include "dmftqsim/mitigation.hpp"

namespace dmftqsim {
namespace {

TEST(Mitigation, CalibrationEstimatesInjectedErrors) {
  NoiseModel n;
  n.readout_p01 = 0.03;
  n.readout_p10 = 0.05;
  const auto cal = calibrate_readout(n, 65536, 4);
  EXPECT_NEAR(cal.p01, 0.03, 0.005);
  EXPECT_NEAR(cal.p10, 0.05, 0.005);
  EXPECT_EQ(cal.shots, 65536u);

  const auto clean = calibrate_readout({}, 65536, 4);
  EXPECT_EQ(clean.p01, 0.0);
  EXPECT_EQ(clean.p10, 0.0);
}

TEST(Mitigation, CalibrationRejectsDegenerateChannel) {
  NoiseModel n;
  n.readout_p01 = n.readout_p10 = 0.5;
  EXPECT_THROW(calibrate_readout(n, 65536, 1), std::invalid_argument);
  EXPECT_THROW(calibrate_readout({}, 100, 1), std::invalid_argument);
}

TEST(Mitigation, ReadoutCorrection) {
  const ReadoutCalibration none{};
  for (double z : {-1.0, -0.3, 0.0, 0.8}) EXPECT_EQ(correct_readout(z, none), z);

  const ReadoutCalibration cal{0.0, 0.05, 0};
  // Forward model spelled out from the assignment probabilities.
  const double z = 0.9;
  const double p0 = (1 + z) / 2, p1 = (1 - z) / 2;
  const double read0 = p0 * (1 - cal.p01) + p1 * cal.p10;
  const double raw = 2 * read0 - 1;
  EXPECT_NEAR(apply_readout_model(z, cal), raw, 1e-15);
  EXPECT_NEAR(correct_readout(raw, cal), z, 1e-12);

  const ReadoutCalibration sym{0.03, 0.03, 0};
  bool clamped = false;
  EXPECT_EQ(correct_readout(1.0, sym, &clamped), 1.0);
  EXPECT_TRUE(clamped);
  correct_readout(0.5, sym, &clamped);
  EXPECT_FALSE(clamped);

  EXPECT_THROW(correct_readout(0.2, ReadoutCalibration{0.6, 0.4, 0}), std::invalid_argument);
}

TEST(Mitigation, CorrectionInvertsChannelEverywhere) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const ReadoutCalibration cal{rng.uniform(0, 0.2), rng.uniform(0, 0.2), 0};
    const double z = rng.uniform(-1, 1);
    EXPECT_NEAR(correct_readout(apply_readout_model(z, cal), cal), z, 1e-12);
  }
}

TEST(Mitigation, NoiselessDataExtrapolatesToItself) {
  const auto fit = fit_exponential_decay({0, 1, 2}, {{0.7, 0.7, 0.7}, {-0.2, -0.2, -0.2}}, 3.0);
  EXPECT_EQ(fit.decay, 0.0);
  EXPECT_EQ(fit.extrapolated[0], 0.7);
  EXPECT_EQ(fit.extrapolated[1], -0.2);
  EXPECT_FALSE(fit.decay_out_of_range);
}

TEST(Mitigation, SyntheticDecayIsRecovered) {
  const double r = 0.93, m0 = 2.5;
  std::vector<int> folds{0, 1, 2, 3};
  std::vector<std::vector<double>> raw(2);
  const double amp[2] = {0.8, -0.35};
  for (int j = 0; j < 2; ++j) {
    for (int k : folds) raw[j].push_back(amp[j] * std::pow(r, m0 + k));
  }
  const auto fit = fit_exponential_decay(folds, raw, m0);
  EXPECT_NEAR(fit.decay, 1 - r, 1e-10);
  EXPECT_NEAR(fit.extrapolated[0], 0.8, 1e-10);
  EXPECT_NEAR(fit.extrapolated[1], -0.35, 1e-10);
  EXPECT_NEAR(fit.fitted(0, 3), raw[0][3], 1e-10);
}

TEST(Mitigation, FitNeedsThreeFolds) {
  EXPECT_THROW(fit_exponential_decay({0, 1}, {{0.5, 0.4}}, 1.0), std::invalid_argument);
  EXPECT_THROW(fit_exponential_decay({1, 2, 3}, {{0.5, 0.4, 0.3}}, 1.0), std::invalid_argument);
  EXPECT_THROW(fit_exponential_decay({0, 1, 1}, {{0.5, 0.4, 0.4}}, 1.0), std::invalid_argument);
}

TEST(Mitigation, GrowingSignalIsFlagged) {
  const auto fit = fit_exponential_decay({0, 1, 2}, {{0.5, 0.6, 0.72}}, 1.0);
  EXPECT_TRUE(fit.decay_out_of_range);
  EXPECT_EQ(fit.extrapolated[0], 0.5);
}

// <X_A> = 0.8 after a base circuit with one two-qubit gate; each fold adds a
// CNOT pair.
Circuit folded(int k) {
  Circuit c;
  c.add(Gate::cnot(1, 2));
  Circuit unit;
  unit.add(Gate::cnot(1, 2));
  for (int i = 0; i < k; ++i) c.append(noisy_identity(unit));
  c.add(Gate::ry(5, std::asin(0.8)));
  return c;
}

TEST(Mitigation, GlobalNoiseExtrapolatesExactly) {
  NoiseModel n;
  n.two_qubit_depolarizing = 0.03;
  n.scope = NoiseScope::Global;
  EXPECT_DOUBLE_EQ(base_fold_units(folded), 0.5);
  const auto fit = zero_noise_extrapolate(folded, {0, 1, 2}, Basis::X, 0, n, 0);
  EXPECT_NEAR(fit.raw[0][1], 0.8 * std::pow(0.97, 3), 1e-12);
  EXPECT_NEAR(fit.extrapolated[0], 0.8, 1e-10);
}

TEST(Mitigation, GlobalNoiseExtrapolationUnderShotNoise) {
  NoiseModel n;
  n.two_qubit_depolarizing = 0.03;
  n.scope = NoiseScope::Global;
  const int seeds = 30;
  std::vector<double> est;
  for (int s = 0; s < seeds; ++s) {
    est.push_back(zero_noise_extrapolate(folded, {0, 1, 2}, Basis::X, 8192, n, 100 + s).extrapolated[0]);
  }
  double mean = 0;
  for (double x : est) mean += x;
  mean /= seeds;
  double var = 0;
  for (double x : est) var += (x - mean) * (x - mean);
  const double sigma = std::sqrt(var / (seeds - 1));
  int inside = 0;
  for (double x : est) inside += std::abs(x - 0.8) <= 2 * sigma ? 1 : 0;
  EXPECT_GE(inside, static_cast<int>(0.85 * seeds));
  EXPECT_LE(std::abs(mean - 0.8), 2 * sigma / std::sqrt(seeds));
}

struct NoisySeries {
  GreensSeries ideal, raw, mitigated;
};

NoisySeries noisy_trotter_series(NoiseScope scope) {
  const auto p = AimParameters::half_filled(8, 1);
  const auto prep = prepare_ground_state(p, 1e-2);
  MeasureOptions raw;
  raw.exact_expectations = true;
  raw.noise.two_qubit_depolarizing = 0.01;
  raw.noise.scope = scope;
  MeasureOptions mit = raw;
  mit.mitigation.zne = true;
  return {exact_trotter_series(p, prep.vector, 6, 0.5),
          measure_greens_series(p, prep.circuit, 6, 0.5, raw).series,
          measure_greens_series(p, prep.circuit, 6, 0.5, mit).series};
}

TEST(Mitigation, ExtrapolationRestoresSeriesUnderGlobalNoise) {
  const auto s = noisy_trotter_series(NoiseScope::Global);
  for (std::size_t k = 0; k < s.raw.size(); ++k) {
    const double before = std::abs(s.raw.ig_retarded[k] - s.ideal.ig_retarded[k]);
    const double after = std::abs(s.mitigated.ig_retarded[k] - s.ideal.ig_retarded[k]);
    EXPECT_LT(after, before) << "t = " << s.raw.times[k];
    EXPECT_LT(after, 1e-9) << "t = " << s.raw.times[k];
  }
}

// Gate-local noise also shifts values near a node of iG instead of only
// damping them, so a point close to zero can get worse; the series as a
// whole still improves.
TEST(Mitigation, ExtrapolationImprovesSeriesUnderLocalNoise) {
  const auto s = noisy_trotter_series(NoiseScope::Local);
  double before = 0, after = 0;
  int improved = 0;
  for (std::size_t k = 0; k < s.raw.size(); ++k) {
    const double b = s.raw.ig_retarded[k] - s.ideal.ig_retarded[k];
    const double a = s.mitigated.ig_retarded[k] - s.ideal.ig_retarded[k];
    before += b * b, after += a * a;
    improved += std::abs(a) < std::abs(b) ? 1 : 0;
  }
  EXPECT_LT(after, 0.25 * before);
  EXPECT_GE(improved, static_cast<int>(s.raw.size()) - 1);
}

}  // namespace
}  // namespace dmftqsim
