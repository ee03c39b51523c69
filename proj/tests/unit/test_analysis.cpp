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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dmftqsim/analysis.hpp"
#include "dmftqsim/ground_state.hpp"

namespace dmftqsim {
namespace {

std::vector<double> sample(const FitParams& f, const std::vector<double>& times) {
  std::vector<double> y;
  for (double t : times) y.push_back(f(t));
  return y;
}

FitParams two_cosine(double a1, double w1, double a2, double w2) {
  FitParams f;
  f.alpha1 = a1, f.omega1 = w1, f.alpha2 = a2, f.omega2 = w2;
  return f;
}

ComplexSpectrum constant_sigma(Complex value) {
  ComplexSpectrum s;
  s.omegas = frequency_grid(-8, 8, 0.005);
  s.values.assign(s.omegas.size(), value);
  s.flagged.assign(s.omegas.size(), false);
  s.delta = 0.1;
  return s;
}

TEST(Analysis, SingleCosineFit) {
  const auto times = time_grid(6, 0.5);
  std::vector<double> y;
  for (double t : times) y.push_back(std::cos(4 * t));
  const auto f = fit_time_series(times, y, 0.5);
  EXPECT_NEAR(f.alpha1, 0.5, 1e-6);
  EXPECT_NEAR(f.omega1, 4.0, 1e-6);
  EXPECT_NEAR(f.alpha2, 0.0, 1e-6);
}

TEST(Analysis, FitRoundTripOnSevenPoints) {
  const auto times = time_grid(6, 0.5);
  const std::vector<FitParams> cases{
      two_cosine(0.461, 3.980, 0.003, 2.116), two_cosine(0.35, 5.0, 0.15, 0.6),
      two_cosine(0.3, 1.2, 0.2, 2.9),         two_cosine(0.42, 4.4, -0.08, 1.7),
  };
  for (const auto& want : cases) {
    const auto got = fit_time_series(times, sample(want, times), 0.5);
    EXPECT_NEAR(got.alpha1, want.alpha1, 1e-6);
    EXPECT_NEAR(got.alpha2, want.alpha2, 1e-6);
    EXPECT_NEAR(got.omega1, want.omega1, 1e-6);
    EXPECT_NEAR(got.omega2, want.omega2, 1e-6);
    EXPECT_LT(got.residual, 1e-8);
  }
}

TEST(Analysis, DenseExactFitRecoversPoles) {
  const auto p = AimParameters::half_filled(8, 1);
  const auto f = fit_time_series(exact_greens_series(p, time_grid(200, 0.1)), 0.1);
  const double lo = std::min(f.omega1, f.omega2), hi = std::max(f.omega1, f.omega2);
  EXPECT_NEAR(lo, 0.59236, 1e-3);
  EXPECT_NEAR(hi, 5.06450, 1e-3);
  EXPECT_NEAR(2 * (f.alpha1 + f.alpha2), 1.0, 1e-6);
}

TEST(Analysis, FitCollapsesDegenerateFrequencies) {
  const auto times = time_grid(8, 0.5);
  std::vector<double> y;
  for (double t : times) y.push_back(std::cos(2.5 * t));
  const auto f = fit_time_series(times, y, 0.5);
  EXPECT_EQ(f.alpha2, 0.0);
  EXPECT_NEAR(f.omega1, 2.5, 1e-6);
  EXPECT_THROW(fit_time_series(time_grid(3, 0.5), {1, 0, 0, 0}, 0.5), std::invalid_argument);
}

TEST(Analysis, FrequencyGreensValues) {
  const auto g = greens_frequency(two_cosine(0.5, 4, 0, 0), {0.0}, 0.1);
  const Complex want = 0.5 * (1.0 / Complex(-4, 0.1) + 1.0 / Complex(4, 0.1));
  EXPECT_NEAR(std::abs(g.values[0] - want), 0.0, 1e-15);
  EXPECT_NEAR(g.values[0].imag(), -0.0062461, 1e-7);
  EXPECT_NEAR(g.values[0].real(), 0.0, 1e-15);
}

TEST(Analysis, FrequencyGreensSymmetries) {
  const auto grid = frequency_grid(-6, 6, 0.01);
  const auto g = greens_frequency(two_cosine(0.3, 3.1, 0.2, 0.7), grid, 0.1);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_NEAR(grid[i], -grid[n - 1 - i], 1e-12);
    EXPECT_NEAR(std::abs(g.values[n - 1 - i] + std::conj(g.values[i])), 0.0, 1e-14);
  }
  const auto sharp = greens_frequency(two_cosine(0.3, 3.1, 0.2, 0.7), {1.9}, 1e-9);
  EXPECT_LT(std::abs(sharp.values[0].imag()), 1e-8);
}

TEST(Analysis, BareGreens) {
  const auto grid = frequency_grid(-3, 3, 0.25);
  const auto g0 = bare_greens(4, 0, 0, grid, 0.1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(std::abs(g0.values[i] - 1.0 / Complex(grid[i] + 4, 0.1)), 0.0, 1e-14);
  }

  // Without broadening the poles at +-1 are flagged, as is omega = 0 where
  // the bath denominator vanishes.
  const auto poles = bare_greens(0, 1, 0, grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool at_pole = std::abs(std::abs(grid[i]) - 1) < 1e-12 || grid[i] == 0.0;
    EXPECT_EQ(poles.flagged[i], at_pole) << grid[i];
  }

  const auto sym = bare_greens(0, 1, 0, grid, 0.1);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(std::abs(sym.values[n - 1 - i] + std::conj(sym.values[i])), 0.0, 1e-14);
  }
}

TEST(Analysis, DysonIdentityAndRoundTrip) {
  const auto grid = frequency_grid(-5, 5, 0.05);
  const auto g0 = bare_greens(2, 0.6, 0, grid, 0.1);
  const auto zero = self_energy(g0, g0);
  for (const auto& s : zero.values) EXPECT_EQ(s, Complex(0));

  // Insert a known self-energy analytically and recover it.
  ComplexSpectrum g = g0;
  std::vector<Complex> sigma;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(grid[i], 0.1);
    sigma.push_back(0.3 + 0.2 / (z - 1.5));
    g.values[i] = 1.0 / (1.0 / g0.values[i] - sigma.back());
  }
  const auto back = self_energy(g0, g);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(std::abs(back.values[i] - sigma[i]), 0.0, 1e-8);
}

TEST(Analysis, AtomicSelfEnergy) {
  const double u = 8;
  std::vector<double> grid;
  for (double w = -7.3; w < 7.3; w += 0.37) {
    if (std::abs(w) > 0.05 && std::abs(std::abs(w) - 4) > 0.05) grid.push_back(w);
  }
  const auto g = greens_frequency(two_cosine(0.5, u / 2, 0, 0), grid, 1e-9);
  const auto sigma = self_energy(bare_greens(u / 2, 0, 0, grid, 1e-9), g);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double want = u / 2 + u * u / (4 * grid[i]);
    EXPECT_NEAR(sigma.values[i].real(), want, 1e-5 * std::max(1.0, std::abs(want))) << grid[i];
  }
}

// Positions on (1, 6) where Re Sigma jumps between large values of opposite
// sign, i.e. simple poles.
std::vector<double> sigma_poles(const FitParams& fit) {
  const auto grid = frequency_grid(1, 6, 0.001);
  const auto sigma = self_energy(bare_greens(4, 0, 0, grid, 1e-6), greens_frequency(fit, grid, 1e-6));
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = sigma.values[i].real(), b = sigma.values[i + 1].real();
    if (std::min(std::abs(a), std::abs(b)) > 50 && a * b < 0) out.push_back(grid[i]);
  }
  return out;
}

TEST(Analysis, ShiftedFitCreatesSpuriousSelfEnergyPole) {
  EXPECT_TRUE(sigma_poles(two_cosine(0.5, 4, 0, 0)).empty());
  // A single shifted cosine only rescales the pole at 0.
  EXPECT_TRUE(sigma_poles(two_cosine(0.5, 4.02, 0, 0)).empty());
  // A shifted Hubbard frequency with a weak second cosine, the shape of a
  // noisy atomic-limit fit, puts a pole between the two G poles.
  const auto poles = sigma_poles(two_cosine(0.497, 4.02, 0.003, 2.116));
  ASSERT_EQ(poles.size(), 1u);
  EXPECT_GT(poles[0], 2.116);
  EXPECT_LT(poles[0], 4.02);
}

TEST(Analysis, ConstantSelfEnergyHasUnitWeight) {
  const auto s = constant_sigma(Complex(0.7, 0.0));
  EXPECT_NEAR(qp_weight_derivative(s).z, 1.0, 1e-12);
  EXPECT_NEAR(qp_weight_kramers_kronig(s).z, 1.0, 1e-12);
  EXPECT_FALSE(qp_weight_kramers_kronig(s).flagged);
}

TEST(Analysis, AtomicSelfEnergyGivesZeroWeight) {
  const auto p = AimParameters::half_filled(8, 0);
  const auto spectra = compute_spectra(two_cosine(0.5, 4, 0, 0), p);
  EXPECT_LT(qp_weight_derivative(spectra.sigma).z, 1e-3);
  EXPECT_LT(qp_weight_kramers_kronig(spectra.sigma).z, 1e-2);
}

TEST(Analysis, SpectralWeightRules) {
  SpectralOptions atomic;
  atomic.v = 0;
  const auto mott = qp_weight_spectral(two_cosine(0.5, 4, 0, 0), atomic);
  EXPECT_EQ(mott.z, 0.0);
  EXPECT_TRUE(mott.flagged);

  SpectralOptions metal;
  metal.v = 0.5;
  EXPECT_NEAR(qp_weight_spectral(two_cosine(0.3, 3, 0.2, 0.5), metal).z, 0.4, 1e-12);

  // The same fit is rejected when the inner pair lies beyond the window.
  SpectralOptions narrow;
  narrow.v = 0.3;
  EXPECT_EQ(qp_weight_spectral(two_cosine(0.3, 3, 0.2, 0.5), narrow).z, 0.0);

  SpectralOptions floor = metal;
  floor.peak_floor = 0.5;
  EXPECT_EQ(qp_weight_spectral(two_cosine(0.3, 3, 0.2, 0.5), floor).z, 0.0);
}

TEST(Analysis, SpectralWeightOnGrid) {
  const auto fit = two_cosine(0.3, 3, 0.2, 0.5);
  const auto a = spectral_function(greens_frequency(fit, frequency_grid(-8, 8, 0.002), 0.02));
  EXPECT_NEAR(qp_weight_spectral(a).z, 0.4, 0.02);
  const auto merged = spectral_function(greens_frequency(fit, frequency_grid(-8, 8, 0.002), 1.0));
  EXPECT_EQ(qp_weight_spectral(merged).z, 0.0);
}

TEST(Analysis, SpectralSumRules) {
  // A Lorentzian of unit weight, truncated to the grid.
  ComplexSpectrum g;
  g.omegas = frequency_grid(-8, 8, 0.005);
  g.delta = 0.1;
  for (double w : g.omegas) g.values.push_back(1.0 / Complex(w, 0.1));
  g.flagged.assign(g.omegas.size(), false);
  EXPECT_NEAR(integrate(spectral_function(g)), 2 / M_PI * std::atan(8 / 0.1), 1e-5);

  const auto fit = two_cosine(0.3, 3, 0.15, 0.5);
  const auto wide = frequency_grid(-400, 400, 0.005);
  EXPECT_NEAR(integrate(spectral_function(greens_frequency(fit, wide, 0.1))), 2 * (0.3 + 0.15), 1e-3);

  const auto p = AimParameters::half_filled(4, 0.7);
  const auto exact_fit = fit_time_series(exact_greens_series(p, time_grid(60, 0.1)), 0.1);
  EXPECT_NEAR(integrate(spectral_function(greens_frequency(exact_fit, wide, 0.1))), 1.0, 1e-3);
}

TEST(Analysis, MatsubaraGreens) {
  const auto fit = two_cosine(0.5, 4, 0, 0);
  const double w0 = M_PI * 0.1;
  const Complex g = matsubara_greens(fit, 0.1, 0);
  const Complex want = 0.5 * (1.0 / Complex(-4, w0) + 1.0 / Complex(4, w0));
  EXPECT_NEAR(std::abs(g - want), 0.0, 1e-15);
  EXPECT_NEAR(g.real(), 0.0, 1e-15);

  const double hot = 200;
  EXPECT_NEAR(std::abs(matsubara_greens(fit, hot, 0) * Complex(0, M_PI * hot) - 1.0), 0.0, 1e-4);
  EXPECT_THROW(matsubara_greens(fit, 0.0, 0), std::invalid_argument);
}

TEST(Analysis, AtomicMatsubaraWeightVanishes) {
  const auto m = qp_weight_matsubara(two_cosine(0.5, 4, 0, 0), 4, 0, 0, default_temperature_grid());
  for (const auto& pt : m.points) {
    const double w0 = M_PI * pt.temperature;
    EXPECT_NEAR(pt.z, 1 / (1 + 16 / (w0 * w0)), 1e-8);
  }
  EXPECT_LT(m.z.z, 1e-3);
  EXPECT_THROW(qp_weight_matsubara(two_cosine(0.5, 4, 0, 0), 4, 0, 0, {0.01, 0.02, 0.005}),
               std::invalid_argument);
}

// Exact data at the metallic U = 4 fixed point of the derivative loop.
TEST(Analysis, EstimatorsAgreeOnExactMetallicFit) {
  const auto p = AimParameters::half_filled(4, 0.7476);
  const auto fit = fit_time_series(exact_greens_series(p, time_grid(60, 0.1)), 0.1);
  const auto spectra = compute_spectra(fit, p);
  const double z_der = qp_weight_derivative(spectra.sigma).z;
  const double z_kk = qp_weight_kramers_kronig(spectra.sigma).z;
  const double z_mats = qp_weight_matsubara(fit, p.mu_eff(), p.v, 0, default_temperature_grid()).z.z;
  EXPECT_NEAR(z_kk, z_der, 0.02);
  EXPECT_NEAR(z_mats, z_der, 0.02);
  EXPECT_NEAR(z_der, 0.5585, 0.005);

  // The spectral estimator reads the inner-pair weight directly; on this fit
  // it differs from the derivative estimator by more than 0.02.
  SpectralOptions so;
  so.v = p.v;
  const double z_spec = qp_weight_spectral(fit, so).z;
  EXPECT_GT(z_spec, 0.45);
  EXPECT_LT(z_spec, z_der);
}

TEST(Analysis, ExactPolesAndFitAgreeOnMatsubaraAxis) {
  const auto p = AimParameters::half_filled(8, 1);
  const auto fit = fit_time_series(exact_greens_series(p, time_grid(200, 0.1)), 0.1);
  const auto t = default_temperature_grid();
  const auto ref = qp_weight_matsubara(lehmann_poles(p), p.mu_eff(), p.v, 0, t);
  const auto got = qp_weight_matsubara(fit, p.mu_eff(), p.v, 0, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(std::abs(got.points[i].g - ref.points[i].g), 0.0, 1e-4);
  }
}

TEST(Analysis, MatsubaraCurvesConvergeWithTimeStep) {
  const auto p = AimParameters::half_filled(8, 1);
  const auto psi = exact_ground_state(p).vector;
  const auto t = default_temperature_grid();
  const auto ref = qp_weight_matsubara(lehmann_poles(p), p.mu_eff(), p.v, 0, t);
  double prev = INFINITY;
  for (double dt : {0.5, 0.1, 0.01}) {
    const int n = static_cast<int>(std::lround(6.0 / dt));
    const auto fit = fit_time_series(exact_trotter_series(p, psi, n, dt), dt);
    const auto m = qp_weight_matsubara(fit, p.mu_eff(), p.v, 0, t);
    double err = 0;
    for (std::size_t i = 0; i < t.size(); ++i) err = std::max(err, std::abs(m.points[i].g - ref.points[i].g));
    EXPECT_LT(err, prev) << dt;
    prev = err;
  }
}

}  // namespace
}  // namespace dmftqsim
