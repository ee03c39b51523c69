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

#include "dmftqsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <ceres/ceres.h>

#include "dmftqsim/csv.hpp"

namespace dmftqsim {

namespace {

constexpr double kPi = std::numbers::pi;

struct TwoCosineResidual {
  double t, y;
  template <typename T>
  bool operator()(const T* x, T* r) const {
    using std::cos;
    r[0] = T(2.0) * (x[0] * cos(x[2] * T(t)) + x[1] * cos(x[3] * T(t))) - T(y);
    return true;
  }
};

struct OneCosineResidual {
  double t, y;
  template <typename T>
  bool operator()(const T* x, T* r) const {
    using std::cos;
    r[0] = T(2.0) * x[0] * cos(x[1] * T(t)) - T(y);
    return true;
  }
};

double rms(const FitParams& f, const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double e = f(t[k]) - y[k];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(t.size()));
}

// Linear least-squares amplitudes at fixed frequencies.
FitParams linear_amplitudes(double w1, double w2, const std::vector<double>& t,
                            const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const bool single = w1 == w2;
  Eigen::MatrixXd a(n, single ? 1 : 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k, 0) = 2.0 * std::cos(w1 * t[k]);
    if (!single) a(k, 1) = 2.0 * std::cos(w2 * t[k]);
    b[k] = y[k];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  FitParams f;
  f.omega1 = w1;
  f.omega2 = w2;
  f.alpha1 = x[0];
  f.alpha2 = single ? 0.0 : x[1];
  f.residual = rms(f, t, y);
  return f;
}

// Frequencies from the symmetric Prony recurrence. With (Sy)_k =
// (y_{k+1} + y_{k-1}) / 2 and the even extension y_{-k} = y_k, each cosine
// is an eigenvector of S with eigenvalue cos(omega dt), so
// S^2 y - (c1 + c2) S y + c1 c2 y = 0.
std::optional<std::pair<double, double>> prony_frequencies(const std::vector<double>& y,
                                                           double dt) {
  const int n = static_cast<int>(y.size()) - 1;
  if (n < 4) return std::nullopt;
  auto at = [&](int k) { return y[std::abs(k)]; };
  auto s1 = [&](int k) { return 0.5 * (at(k + 1) + at(k - 1)); };
  auto s2 = [&](int k) { return 0.5 * (s1(k + 1) + s1(std::abs(k - 1))); };
  Eigen::MatrixXd a(n - 1, 2);
  Eigen::VectorXd b(n - 1);
  for (int k = 0; k <= n - 2; ++k) {
    a(k, 0) = s1(k);
    a(k, 1) = -at(k);
    b[k] = s2(k);
  }
  const Eigen::Vector2d sp = a.colPivHouseholderQr().solve(b);
  if (!sp.allFinite()) return std::nullopt;
  const double disc = std::max(sp[0] * sp[0] - 4.0 * sp[1], 0.0);
  auto freq = [&](double c) { return std::acos(std::clamp(c, -1.0, 1.0)) / dt; };
  return std::make_pair(freq(0.5 * (sp[0] + std::sqrt(disc))), freq(0.5 * (sp[0] - std::sqrt(disc))));
}

ceres::Solver::Options lm_options() {
  ceres::Solver::Options o;
  o.linear_solver_type = ceres::DENSE_QR;
  o.max_num_iterations = 200;
  o.function_tolerance = 1e-16;
  o.gradient_tolerance = 1e-16;
  o.parameter_tolerance = 1e-16;
  o.logging_type = ceres::SILENT;
  return o;
}

FitParams refine_single(double alpha, double omega, double w_max, const std::vector<double>& t,
                        const std::vector<double>& y) {
  double x[2] = {alpha, std::clamp(omega, 0.0, w_max)};
  ceres::Problem problem;
  for (std::size_t k = 0; k < t.size(); ++k) {
    problem.AddResidualBlock(
        new ceres::AutoDiffCostFunction<OneCosineResidual, 1, 2>(new OneCosineResidual{t[k], y[k]}),
        nullptr, x);
  }
  problem.SetParameterLowerBound(x, 1, 0.0);
  problem.SetParameterUpperBound(x, 1, w_max);
  ceres::Solver::Summary summary;
  ceres::Solve(lm_options(), &problem, &summary);
  FitParams f;
  f.alpha1 = x[0];
  f.omega1 = f.omega2 = x[1];
  f.collapsed = true;
  f.converged = summary.IsSolutionUsable();
  f.residual = rms(f, t, y);
  return f;
}

FitParams normalize(FitParams f, double w_max, const std::vector<double>& t,
                    const std::vector<double>& y) {
  if (std::abs(f.alpha2) > std::abs(f.alpha1)) {
    std::swap(f.alpha1, f.alpha2);
    std::swap(f.omega1, f.omega2);
  }
  const bool same_freq = std::abs(f.omega1 - f.omega2) < 1e-6;
  if (same_freq || std::abs(f.alpha2) < 1e-8) {
    const bool converged = f.converged;
    f = refine_single(same_freq ? f.alpha1 + f.alpha2 : f.alpha1, f.omega1, w_max, t, y);
    f.converged = f.converged && converged;
  }
  return f;
}

FitParams refine_pair(const FitParams& start, double w_max, const std::vector<double>& t,
                      const std::vector<double>& y) {
  double x[4] = {start.alpha1, start.alpha2, std::clamp(start.omega1, 0.0, w_max),
                 std::clamp(start.omega2, 0.0, w_max)};
  ceres::Problem problem;
  for (std::size_t k = 0; k < t.size(); ++k) {
    problem.AddResidualBlock(
        new ceres::AutoDiffCostFunction<TwoCosineResidual, 1, 4>(new TwoCosineResidual{t[k], y[k]}),
        nullptr, x);
  }
  for (int i : {2, 3}) {
    problem.SetParameterLowerBound(x, i, 0.0);
    problem.SetParameterUpperBound(x, i, w_max);
  }
  ceres::Solver::Summary summary;
  ceres::Solve(lm_options(), &problem, &summary);
  FitParams f;
  f.alpha1 = x[0];
  f.alpha2 = x[1];
  f.omega1 = x[2];
  f.omega2 = x[3];
  f.converged = summary.IsSolutionUsable();
  f.residual = rms(f, t, y);
  return normalize(f, w_max, t, y);
}

bool better(const FitParams& a, const FitParams& b) {
  const double tie = 1e-12 + 1e-9 * std::min(a.residual, b.residual);
  if (std::abs(a.residual - b.residual) > tie) return a.residual < b.residual;
  return a.omega1 < b.omega1;
}

}  // namespace

double FitParams::operator()(double t) const {
  return 2.0 * (alpha1 * std::cos(omega1 * t) + alpha2 * std::cos(omega2 * t));
}

FitParams fit_time_series(const std::vector<double>& times, const std::vector<double>& values,
                          double dt, const FitOptions& opts) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_time_series: size mismatch");
  if (times.size() < 5) throw std::invalid_argument("fit_time_series: needs at least 5 points");
  if (!(dt > 0.0)) throw std::invalid_argument("fit_time_series: dt must be positive");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("fit_time_series: non-finite data");
  }
  const double w_max = kPi / dt;

  std::vector<FitParams> starts;
  for (int i = 0; i < opts.grid; ++i) {
    for (int j = i; j < opts.grid; ++j) {
      const double wi = w_max * i / (opts.grid - 1), wj = w_max * j / (opts.grid - 1);
      starts.push_back(linear_amplitudes(wi, wj, times, values));
    }
  }
  std::stable_sort(starts.begin(), starts.end(), better);
  starts.resize(std::min<std::size_t>(starts.size(), static_cast<std::size_t>(opts.refined_starts)));
  // The Prony recurrence needs uniform sampling from t = 0.
  bool uniform = std::abs(times[0]) < 1e-12;
  for (std::size_t k = 1; uniform && k < times.size(); ++k) {
    uniform = std::abs(times[k] - k * dt) < 1e-9 * (1.0 + k * dt);
  }
  if (uniform) {
    if (auto pr = prony_frequencies(values, dt)) {
      starts.insert(starts.begin(), linear_amplitudes(pr->first, pr->second, times, values));
    }
  }

  FitParams best;
  bool have = false;
  for (const auto& s : starts) {
    const FitParams f = refine_pair(s, w_max, times, values);
    if (!have || better(f, best)) {
      best = f;
      have = true;
    }
  }
  return best;
}

FitParams fit_time_series(const GreensSeries& series, double dt, const FitOptions& opts) {
  return fit_time_series(series.times, series.ig_retarded, dt, opts);
}

std::vector<double> frequency_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("frequency_grid: bad range");
  const auto i_lo = static_cast<long>(std::ceil(lo / step - 1e-9));
  const auto i_hi = static_cast<long>(std::floor(hi / step + 1e-9));
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(i_hi - i_lo + 1));
  for (long i = i_lo; i <= i_hi; ++i) w.push_back(static_cast<double>(i) * step);
  return w;
}

ComplexSpectrum greens_frequency(const FitParams& fit, const std::vector<double>& omegas,
                                 double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("greens_frequency: delta must be > 0");
  ComplexSpectrum s{omegas, {}, std::vector<bool>(omegas.size(), false), delta};
  s.values.reserve(omegas.size());
  for (double w : omegas) {
    const Complex z(w, delta);
    s.values.push_back(fit.alpha1 * (1.0 / (z - fit.omega1) + 1.0 / (z + fit.omega1)) +
                       fit.alpha2 * (1.0 / (z - fit.omega2) + 1.0 / (z + fit.omega2)));
  }
  return s;
}

ComplexSpectrum bare_greens(double mu_eff, double v, double eps1_minus_mu,
                            const std::vector<double>& omegas, double delta) {
  if (delta < 0.0) throw std::invalid_argument("bare_greens: delta must be >= 0");
  ComplexSpectrum s{omegas, {}, std::vector<bool>(omegas.size(), false), delta};
  s.values.reserve(omegas.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const Complex z(omegas[i], delta);
    const Complex bath = z - eps1_minus_mu;
    if (v != 0.0 && bath == 0.0) {
      // Exactly on the bath level, G0 vanishes; keep the limit and flag it.
      s.values.emplace_back(0.0, 0.0);
      s.flagged[i] = true;
      continue;
    }
    const Complex inv = z + mu_eff - (v == 0.0 ? Complex(0.0) : v * v / bath);
    if (inv == 0.0) {
      s.values.emplace_back(nan, nan);
      s.flagged[i] = true;
    } else {
      s.values.push_back(1.0 / inv);
    }
  }
  return s;
}

ComplexSpectrum self_energy(const ComplexSpectrum& g0, const ComplexSpectrum& g) {
  if (g0.omegas != g.omegas) throw std::invalid_argument("self_energy: grids differ");
  ComplexSpectrum s{g.omegas, {}, std::vector<bool>(g.omegas.size(), false), g.delta};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < g.omegas.size(); ++i) {
    const bool bad = g0.flagged[i] || g.flagged[i] || !(std::abs(g0.values[i]) >= 1e-300) ||
                     !(std::abs(g.values[i]) >= 1e-300);
    s.flagged[i] = bad;
    s.values.push_back(bad ? Complex(nan, nan) : 1.0 / g0.values[i] - 1.0 / g.values[i]);
  }
  return s;
}

RealSpectrum spectral_function(const ComplexSpectrum& g) {
  RealSpectrum a{g.omegas, {}, g.delta};
  a.values.reserve(g.values.size());
  for (const auto& v : g.values) a.values.push_back(-v.imag() / kPi);
  return a;
}

double integrate(const RealSpectrum& a) {
  double s = 0.0;
  for (std::size_t i = 1; i < a.omegas.size(); ++i) {
    s += 0.5 * (a.values[i] + a.values[i - 1]) * (a.omegas[i] - a.omegas[i - 1]);
  }
  return s;
}

namespace {

std::size_t zero_index(const std::vector<double>& w) {
  if (w.size() < 5) throw std::invalid_argument("spectrum too short");
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (std::abs(w[i]) < std::abs(w[i0])) i0 = i;
  }
  const double step = w[1] - w[0];
  if (std::abs(w[i0]) > 1e-9 * step) throw std::invalid_argument("grid does not contain omega = 0");
  return i0;
}

ZEstimate from_slope(double slope) {
  ZEstimate e;
  e.raw = 1.0 / (1.0 - slope);
  if (!std::isfinite(e.raw)) {
    e.z = 0.0;
    e.flagged = true;
    e.note = "non-finite";
  } else if (e.raw < 0.0 || e.raw > 1.0) {
    e.z = std::clamp(e.raw, 0.0, 1.0);
    e.flagged = true;
    e.note = "clamped";
  } else {
    e.z = e.raw;
  }
  return e;
}

}  // namespace

ZEstimate qp_weight_derivative(const ComplexSpectrum& sigma) {
  const std::size_t i0 = zero_index(sigma.omegas);
  if (i0 < 2 || i0 + 2 >= sigma.omegas.size()) throw std::invalid_argument("grid too short around 0");
  if (sigma.flagged[i0 - 2] || sigma.flagged[i0 + 2]) {
    return {0.0, std::numeric_limits<double>::quiet_NaN(), true, "flagged points near 0"};
  }
  const double slope = (sigma.values[i0 + 2].real() - sigma.values[i0 - 2].real()) /
                       (sigma.omegas[i0 + 2] - sigma.omegas[i0 - 2]);
  return from_slope(slope);
}

ZEstimate qp_weight_kramers_kronig(const ComplexSpectrum& sigma) {
  const std::size_t i0 = zero_index(sigma.omegas);
  const std::size_t n = sigma.omegas.size();
  constexpr std::size_t kWindow = 3;
  if (i0 < kWindow + 1 || i0 + kWindow + 1 >= n) throw std::invalid_argument("grid too short around 0");
  if (sigma.flagged[i0]) return {0.0, std::numeric_limits<double>::quiet_NaN(), true, "flagged at 0"};

  bool skipped = false;
  auto f = [&](std::size_t i) { return sigma.values[i].imag() / (sigma.omegas[i] * sigma.omegas[i]); };
  auto trapezoid = [&](std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t i = from + 1; i <= to; ++i) {
      if (sigma.flagged[i] || sigma.flagged[i - 1]) {
        skipped = true;
        continue;
      }
      s += 0.5 * (f(i) + f(i - 1)) * (sigma.omegas[i] - sigma.omegas[i - 1]);
    }
    return s;
  };
  const double a = sigma.omegas[i0 + kWindow] - sigma.omegas[i0];
  const double outer = trapezoid(0, i0 - kWindow) + trapezoid(i0 + kWindow, n - 1);
  const double slope = (outer - 2.0 * sigma.values[i0].imag() / a) / kPi;

  ZEstimate e = from_slope(slope);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sigma.flagged[i]) peak = std::max(peak, std::abs(sigma.values[i].imag()));
  }
  const double edge = std::max(std::abs(sigma.values.front().imag()), std::abs(sigma.values.back().imag()));
  if (edge > 1e-3 * peak) {
    e.flagged = true;
    e.note = e.note.empty() ? "edge decay" : e.note + ", edge decay";
  }
  if (skipped) {
    e.flagged = true;
    e.note = e.note.empty() ? "flagged points skipped" : e.note + ", flagged points skipped";
  }
  return e;
}

ZEstimate qp_weight_spectral(const FitParams& fit, const SpectralOptions& opts) {
  if (!(opts.v > 0.0)) return {0.0, 0.0, true, "atomic"};
  double w_in = fit.omega1, a_in = fit.alpha1;
  if (!fit.collapsed && fit.alpha2 != 0.0 && fit.omega2 < fit.omega1) {
    w_in = fit.omega2;
    a_in = fit.alpha2;
  }
  ZEstimate e;
  e.raw = 2.0 * a_in;

  // The inner pair is resolved if A(omega) has a maximum at omega > 0 that
  // rises above A(0) before the midpoint to the next pole.
  const double w_other = fit.collapsed ? std::numeric_limits<double>::infinity()
                                       : std::max(fit.omega1, fit.omega2);
  const double reach = std::min(w_in + 5.0 * opts.delta, 0.5 * (w_in + w_other));
  auto a_at = [&](double w) {
    const Complex z(w, opts.delta);
    const Complex g = fit.alpha1 * (1.0 / (z - fit.omega1) + 1.0 / (z + fit.omega1)) +
                      fit.alpha2 * (1.0 / (z - fit.omega2) + 1.0 / (z + fit.omega2));
    return -g.imag() / kPi;
  };
  const double a0 = a_at(0.0);
  bool resolved = false;
  double prev = a0, cur = a_at(opts.step);
  for (double w = opts.step; w <= reach; w += opts.step) {
    const double next = a_at(w + opts.step);
    if (cur > prev && cur >= next && cur > a0) {
      resolved = true;
      break;
    }
    prev = cur;
    cur = next;
  }

  if (!resolved) return {0.0, e.raw, true, "unresolved"};
  if (w_in > opts.qp_window * opts.v) return {0.0, e.raw, true, "outside window"};
  if (e.raw < opts.peak_floor) return {0.0, e.raw, true, "below floor"};
  e.z = std::clamp(e.raw, 0.0, 1.0);
  if (e.z != e.raw) {
    e.flagged = true;
    e.note = "clamped";
  }
  return e;
}

ZEstimate qp_weight_spectral(const RealSpectrum& a) {
  const auto& w = a.omegas;
  const auto& v = a.values;
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) peaks.push_back(i);
  }
  if (peaks.empty()) return {0.0, 0.0, true, "no peaks"};
  const double step = w[1] - w[0];
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(w[x]) < std::abs(w[y]); });
  if (std::abs(w[peaks[0]]) < 1.5 * step) return {0.0, 0.0, true, "unresolved"};

  // The innermost maximum on each side of zero.
  std::optional<std::size_t> left, right;
  for (std::size_t p : peaks) {
    if (w[p] < 0.0 && !left) left = p;
    if (w[p] > 0.0 && !right) right = p;
  }
  if (!left || !right) return {0.0, 0.0, true, "no inner pair"};

  std::vector<std::size_t> ordered = peaks;
  std::sort(ordered.begin(), ordered.end());
  double total = 0.0;
  for (std::size_t p : {*left, *right}) {
    const auto it = std::find(ordered.begin(), ordered.end(), p);
    double gap = std::numeric_limits<double>::infinity();
    if (it != ordered.begin()) gap = std::min(gap, w[p] - w[*(it - 1)]);
    if (it + 1 != ordered.end()) gap = std::min(gap, w[*(it + 1)] - w[p]);
    const double half = 0.5 * gap;
    RealSpectrum window{{}, {}, a.delta};
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w[i] - w[p]) <= half + 1e-12) {
        window.omegas.push_back(w[i]);
        window.values.push_back(v[i]);
      }
    }
    total += integrate(window);
  }
  ZEstimate e;
  e.raw = total;
  e.z = std::clamp(total, 0.0, 1.0);
  if (e.z != total) {
    e.flagged = true;
    e.note = "clamped";
  }
  return e;
}

Complex matsubara_greens(const FitParams& fit, double temperature, int n) {
  if (!(temperature > 0.0)) throw std::invalid_argument("matsubara_greens: T must be > 0");
  const Complex iw(0.0, (2 * n + 1) * kPi * temperature);
  return fit.alpha1 * (1.0 / (iw - fit.omega1) + 1.0 / (iw + fit.omega1)) +
         fit.alpha2 * (1.0 / (iw - fit.omega2) + 1.0 / (iw + fit.omega2));
}

Complex matsubara_bare_greens(double mu_eff, double v, double eps1_minus_mu, double temperature,
                              int n) {
  if (!(temperature > 0.0)) throw std::invalid_argument("matsubara_bare_greens: T must be > 0");
  const Complex iw(0.0, (2 * n + 1) * kPi * temperature);
  return 1.0 / (iw + mu_eff - v * v / (iw - eps1_minus_mu));
}

namespace {

MatsubaraResult matsubara_ladder(const std::function<Complex(double)>& g_of_t, double mu_eff,
                                 double v, double eps1_minus_mu, const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw std::invalid_argument("qp_weight_matsubara: T must be > 0");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) {
      throw std::invalid_argument("qp_weight_matsubara: T grid must be strictly descending");
    }
  }
  MatsubaraResult out;
  for (double t : t_grid) {
    MatsubaraPoint p;
    p.temperature = t;
    p.g = g_of_t(t);
    p.g0 = matsubara_bare_greens(mu_eff, v, eps1_minus_mu, t, 0);
    p.valid = std::abs(p.g) >= 1e-300 && std::abs(p.g0) >= 1e-300;
    if (p.valid) {
      p.sigma = 1.0 / p.g0 - 1.0 / p.g;
      p.z = 1.0 / (1.0 - p.sigma.imag() / (kPi * t));
      p.valid = std::isfinite(p.z);
    }
    out.points.push_back(p);
  }
  std::vector<const MatsubaraPoint*> valid;
  for (auto it = out.points.rbegin(); it != out.points.rend() && valid.size() < 5; ++it) {
    if (it->valid) valid.push_back(&*it);
  }
  if (valid.size() < 3) throw std::invalid_argument("qp_weight_matsubara: fewer than 3 valid temperatures");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(valid.size()), 3);
  Eigen::VectorXd b(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double t = valid[static_cast<std::size_t>(i)]->temperature;
    a(i, 0) = 1.0;
    a(i, 1) = t;
    a(i, 2) = t * t;
    b[i] = valid[static_cast<std::size_t>(i)]->z;
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  out.z.raw = c[0];
  out.z.z = std::clamp(c[0], 0.0, 1.0);
  if (out.z.z != c[0]) {
    out.z.flagged = true;
    out.z.note = "clamped";
  }
  return out;
}

}  // namespace

MatsubaraResult qp_weight_matsubara(const FitParams& fit, double mu_eff, double v,
                                    double eps1_minus_mu, const std::vector<double>& t_grid) {
  return matsubara_ladder([&](double t) { return matsubara_greens(fit, t, 0); }, mu_eff, v,
                          eps1_minus_mu, t_grid);
}

MatsubaraResult qp_weight_matsubara(const std::vector<LehmannPole>& poles, double mu_eff, double v,
                                    double eps1_minus_mu, const std::vector<double>& t_grid) {
  return matsubara_ladder(
      [&](double t) {
        const Complex iw(0.0, kPi * t);
        Complex g = 0.0;
        for (const auto& pole : poles) g += pole.weight / (iw - pole.omega);
        return g;
      },
      mu_eff, v, eps1_minus_mu, t_grid);
}

std::vector<double> default_temperature_grid() {
  return {0.1, 0.08, 0.06, 0.05, 0.04, 0.03, 0.025, 0.02, 0.015, 0.01, 0.0075, 0.005};
}

Spectra compute_spectra(const FitParams& fit, const AimParameters& p, const GridOptions& grid) {
  const auto omegas = frequency_grid(grid.lo, grid.hi, grid.step);
  Spectra s;
  s.g = greens_frequency(fit, omegas, grid.delta);
  s.g0 = bare_greens(p.mu_eff(), p.v, p.eps1_minus_mu(), omegas, grid.delta);
  s.sigma = self_energy(s.g0, s.g);
  s.a = spectral_function(s.g);
  return s;
}

void write_spectra_csv(std::ostream& out, const Spectra& s) {
  CsvWriter w(out);
  w.header({"omega", "A", "re_g", "im_g", "re_sigma", "im_sigma"});
  for (std::size_t i = 0; i < s.g.omegas.size(); ++i) {
    w.row({s.g.omegas[i], s.a.values[i], s.g.values[i].real(), s.g.values[i].imag(),
           s.sigma.values[i].real(), s.sigma.values[i].imag()});
  }
}

void write_matsubara_csv(std::ostream& out, const MatsubaraResult& m,
                         const MatsubaraResult* reference) {
  if (reference && reference->points.size() != m.points.size()) {
    throw std::invalid_argument("write_matsubara_csv: reference has a different temperature grid");
  }
  CsvWriter w(out);
  std::vector<std::string> head{"T", "re_g_iw0", "im_g_iw0", "re_sigma_iw0", "im_sigma_iw0", "Z_T", "valid"};
  if (reference) {
    head.push_back("rel_err_g");
    head.push_back("rel_err_sigma");
  }
  w.header(head);
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    const auto& p = m.points[i];
    std::vector<CsvCell> row{p.temperature, p.g.real(), p.g.imag(), p.sigma.real(),
                             p.sigma.imag(), p.z, std::int64_t{p.valid ? 1 : 0}};
    if (reference) {
      const auto& r = reference->points[i];
      row.push_back(std::abs(p.g - r.g) / std::abs(r.g));
      row.push_back(std::abs(p.sigma - r.sigma) / std::abs(r.sigma));
    }
    w.row(row);
  }
}

}  // namespace dmftqsim
