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

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "dmftqsim/greens.hpp"
#include "dmftqsim/model.hpp"

namespace dmftqsim {

/// iG(t) ~ 2 [alpha1 cos(omega1 t) + alpha2 cos(omega2 t)], omega1 carrying
/// the larger |alpha|.
struct FitParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double residual = 0.0;  // RMS
  bool converged = true;
  bool collapsed = false;  // single cosine: alpha2 = 0, omega2 = omega1

  double operator()(double t) const;
};

struct FitOptions {
  int grid = 16;           // multistart grid per frequency axis
  int refined_starts = 12; // best grid starts handed to the local solver
};

/// Least-squares two-cosine fit over frequencies in [0, pi/dt].
/// Requires at least 5 points.
FitParams fit_time_series(const std::vector<double>& times, const std::vector<double>& values,
                          double dt, const FitOptions& opts = {});

FitParams fit_time_series(const GreensSeries& series, double dt, const FitOptions& opts = {});

/// Uniform grid omega_i = i * step for integer i covering [lo, hi]; contains
/// 0 exactly when lo <= 0 <= hi.
std::vector<double> frequency_grid(double lo, double hi, double step);

struct ComplexSpectrum {
  std::vector<double> omegas;
  std::vector<Complex> values;
  std::vector<bool> flagged;
  double delta = 0.0;
};

struct RealSpectrum {
  std::vector<double> omegas;
  std::vector<double> values;
  double delta = 0.0;
};

/// G(omega + i delta) of the two-cosine fit.
ComplexSpectrum greens_frequency(const FitParams& fit, const std::vector<double>& omegas,
                                 double delta);

/// G0(omega) = 1 / (z + mu_eff - v^2 / (z - eps1_minus_mu)), z = omega + i delta.
/// Points where a pole is hit exactly are flagged and hold NaN.
ComplexSpectrum bare_greens(double mu_eff, double v, double eps1_minus_mu,
                            const std::vector<double>& omegas, double delta);

/// Sigma = 1/G0 - 1/G. Points where |G| or |G0| < 1e-300 are flagged.
ComplexSpectrum self_energy(const ComplexSpectrum& g0, const ComplexSpectrum& g);

/// A = -Im G / pi.
RealSpectrum spectral_function(const ComplexSpectrum& g);

/// Trapezoidal integral of a real spectrum.
double integrate(const RealSpectrum& a);

/// A quasiparticle-weight estimate. Out-of-range raw values are clamped to
/// [0, 1] and flagged; `note` says why a result was flagged.
struct ZEstimate {
  double z = 0.0;
  double raw = 0.0;
  bool flagged = false;
  std::string note;
};

/// Z = 1 / (1 - dRe Sigma/domega) at omega = 0, central difference over
/// +-2 grid steps.
ZEstimate qp_weight_derivative(const ComplexSpectrum& sigma);

/// dRe Sigma/domega at 0 from Im Sigma: (1/pi) times the finite part of
/// int Im Sigma(w) / w^2 dw, i.e. the integral over |w| > a minus
/// 2 Im Sigma(0) / a, with a = 3 grid steps. Flags grids whose edge
/// |Im Sigma| exceeds 1e-3 of the maximum.
ZEstimate qp_weight_kramers_kronig(const ComplexSpectrum& sigma);

struct SpectralOptions {
  double delta = 0.1;
  double step = 0.005;
  double peak_floor = 0.0;  // inner-pair weights below this count as zero
  // Hybridization of the solved impurity problem. V = 0 is atomic. The
  // quasiparticle poles of the two-site model satisfy |omega| <= V, so an
  // inner pair above qp_window * V is not a quasiparticle.
  double v = std::numeric_limits<double>::infinity();
  double qp_window = 1.25;
};

/// Closed-form peak weight: 2 alpha of the lower-frequency pair, provided
/// that pair shows up as two separate maxima of A(omega) at broadening delta.
/// A merged central peak, an atomic impurity, or a weight below the floor
/// give Z = 0 with a flag, as does an inner pair outside the quasiparticle
/// window. A single-cosine fit counts as the quasiparticle pair itself when
/// hybridized.
ZEstimate qp_weight_spectral(const FitParams& fit, const SpectralOptions& opts = {});

/// Grid version: integrates A over symmetric windows around the two maxima
/// nearest omega = 0, each window half the distance to the neighbouring
/// maximum. A maximum at omega = 0 means the inner pair is unresolved.
ZEstimate qp_weight_spectral(const RealSpectrum& a);

/// G(i omega_n), omega_n = (2n + 1) pi T.
Complex matsubara_greens(const FitParams& fit, double temperature, int n);

/// Bare G0 continued to i omega_n.
Complex matsubara_bare_greens(double mu_eff, double v, double eps1_minus_mu, double temperature,
                              int n);

struct MatsubaraPoint {
  double temperature = 0.0;
  Complex g;
  Complex g0;
  Complex sigma;
  double z = 0.0;
  bool valid = true;
};

struct MatsubaraResult {
  std::vector<MatsubaraPoint> points;
  ZEstimate z;  // T -> 0 quadratic extrapolation over the 5 smallest valid T
};

/// Z(T) = 1 / (1 - Im Sigma(i pi T) / (pi T)) on each temperature, then
/// extrapolated to T = 0. T_grid must be positive and strictly descending;
/// fewer than 3 valid temperatures is an error.
MatsubaraResult qp_weight_matsubara(const FitParams& fit, double mu_eff, double v,
                                    double eps1_minus_mu, const std::vector<double>& t_grid);

/// The same ladder for an exact pole representation of G.
MatsubaraResult qp_weight_matsubara(const std::vector<LehmannPole>& poles, double mu_eff, double v,
                                    double eps1_minus_mu, const std::vector<double>& t_grid);

/// Default temperature ladder from 0.1 down to 0.005.
std::vector<double> default_temperature_grid();

/// Frequency-domain bundle for one fit.
struct Spectra {
  ComplexSpectrum g;
  ComplexSpectrum g0;
  ComplexSpectrum sigma;
  RealSpectrum a;
};

struct GridOptions {
  double lo = -8.0;
  double hi = 8.0;
  double step = 0.005;
  double delta = 0.1;
};

Spectra compute_spectra(const FitParams& fit, const AimParameters& p, const GridOptions& grid = {});

/// spectra.csv: omega, A, Re G, Im G, Re Sigma, Im Sigma.
void write_spectra_csv(std::ostream& out, const Spectra& s);

/// matsubara csv: T, G(i w0), Sigma(i w0), Z(T). With a reference on the
/// same temperatures, adds relative errors of G and Sigma against it.
void write_matsubara_csv(std::ostream& out, const MatsubaraResult& m,
                         const MatsubaraResult* reference = nullptr);

}  // namespace dmftqsim
