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

#include "dmftqsim/greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmftqsim/csv.hpp"
#include "dmftqsim/ground_state.hpp"
#include "dmftqsim/rng.hpp"

namespace dmftqsim {

namespace {

const Complex kI(0.0, 1.0);

const Eigen::MatrixXcd& site_pauli(int which) {
  static const Eigen::MatrixXcd x = pauli_string_matrix(std::vector<PauliFactor>{{1, Axis::X}}, kSystemQubits);
  static const Eigen::MatrixXcd y = pauli_string_matrix(std::vector<PauliFactor>{{1, Axis::Y}}, kSystemQubits);
  return which == 0 ? x : y;
}

Axis axis_of(int which) { return which == 0 ? Axis::X : Axis::Y; }

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Sampled: return "sampled";
    case Provenance::ExactTrotter: return "exact_trotter";
    case Provenance::ExactUnitary: return "exact_unitary";
  }
  return "?";
}

std::pair<Complex, Complex> assemble_greens(const Interferometry& o) {
  const Complex xx = o[0][0], xy = o[0][1], yx = o[1][0], yy = o[1][1];
  const Complex greater =
      -kI / 4.0 * (std::conj(xx) - kI * std::conj(yx) + kI * std::conj(xy) + std::conj(yy));
  const Complex lesser = kI / 4.0 * (xx + kI * xy - kI * yx + yy);
  return {greater, lesser};
}

void push_greens_point(GreensSeries& s, double t, const Interferometry& o) {
  const auto [g, l] = assemble_greens(o);
  const Complex ig = kI * (g - l);
  s.times.push_back(t);
  s.g_greater.push_back(g);
  s.g_lesser.push_back(l);
  s.ig_retarded.push_back(ig.real());
  s.ig_retarded_imag.push_back(ig.imag());
}

Interferometry interferometry_values(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& u) {
  Interferometry o;
  const Eigen::VectorXcd evolved = u * psi;
  for (int b = 0; b < 2; ++b) {
    const Eigen::VectorXcd back = u.adjoint() * (site_pauli(b) * evolved);
    for (int a = 0; a < 2; ++a) o[a][b] = psi.dot(site_pauli(a) * back);
  }
  return o;
}

std::vector<double> time_grid(int n_steps, double dt) {
  if (n_steps < 0) throw std::invalid_argument("time_grid: n_steps must be >= 0");
  std::vector<double> t;
  for (int k = 0; k <= n_steps; ++k) t.push_back(k * dt);
  return t;
}

GreensSeries exact_greens_series(const AimParameters& p, const Eigen::VectorXcd& psi,
                                 const std::vector<double>& times) {
  const Eigen::MatrixXcd h = aim_matrix(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  GreensSeries s;
  s.provenance = Provenance::ExactUnitary;
  for (double t : times) {
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    push_greens_point(s, t, interferometry_values(psi, u));
  }
  return s;
}

GreensSeries exact_greens_series(const AimParameters& p, const std::vector<double>& times) {
  return exact_greens_series(p, exact_ground_state(p).vector, times);
}

GreensSeries exact_trotter_series(const AimParameters& p, const Eigen::VectorXcd& psi,
                                  int n_steps, double dt) {
  const Eigen::MatrixXcd step = trotter_step_matrix(p, dt);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(kSystemDim, kSystemDim);
  GreensSeries s;
  s.provenance = Provenance::ExactTrotter;
  for (int k = 0; k <= n_steps; ++k) {
    if (k > 0) u = step * u;
    push_greens_point(s, k * dt, interferometry_values(psi, u));
  }
  return s;
}

double trotter_error_bound(const AimParameters& p, int n_steps, double dt) {
  if (n_steps < 1) throw std::invalid_argument("trotter_error_bound: n_steps must be >= 1");
  const Eigen::MatrixXcd step = trotter_step_matrix(p, dt);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(kSystemDim, kSystemDim);
  for (int k = 0; k < n_steps; ++k) power = step * power;
  return spectral_norm(unitary_evolution(aim_matrix(p), n_steps * dt) - power);
}

std::vector<LehmannPole> lehmann_poles(const AimParameters& p) {
  const GroundState gs = exact_ground_state(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(aim_matrix(p));
  const double e0 = gs.energy - fermionic_energy_offset(p);
  const Eigen::MatrixXcd cdag = fermion_matrix({Site::Impurity, Spin::Down, true});
  const Eigen::VectorXcd particle = es.eigenvectors().adjoint() * (cdag * gs.vector);
  const Eigen::VectorXcd hole = es.eigenvectors().adjoint() * (cdag.adjoint() * gs.vector);

  std::vector<LehmannPole> raw;
  for (Eigen::Index n = 0; n < es.eigenvalues().size(); ++n) {
    const double de = es.eigenvalues()[n] - e0;
    if (std::norm(particle[n]) > 1e-14) raw.push_back({de, std::norm(particle[n])});
    if (std::norm(hole[n]) > 1e-14) raw.push_back({-de, std::norm(hole[n])});
  }
  std::sort(raw.begin(), raw.end(), [](auto& a, auto& b) { return a.omega < b.omega; });
  std::vector<LehmannPole> merged;
  for (const auto& r : raw) {
    if (!merged.empty() && std::abs(merged.back().omega - r.omega) < 1e-8) {
      merged.back().weight += r.weight;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

MeasuredGreens measure_greens_series(const AimParameters& p, const Circuit& prep, int n_steps,
                                     double dt, const MeasureOptions& opts) {
  if (!opts.exact_expectations && opts.shots == 0) {
    throw std::invalid_argument("measure_greens_series: shots must be positive");
  }
  if (opts.mitigation.readout && !opts.mitigation.calibration) {
    throw std::invalid_argument("measure_greens_series: readout mitigation needs calibration data");
  }
  if (n_steps < 0) throw std::invalid_argument("measure_greens_series: n_steps must be >= 0");
  opts.noise.validate();

  std::vector<int> folds{0};
  if (opts.mitigation.zne) {
    folds = opts.mitigation.folds;
    std::sort(folds.begin(), folds.end());
    if (folds.size() < 3 || folds.front() != 0) {
      throw std::invalid_argument("measure_greens_series: ZNE needs >= 3 folds including 0");
    }
  }
  const Circuit fold_unit = noisy_identity(trotter_step_circuit(p, dt));
  const ReadoutCalibration forward{opts.noise.readout_p01, opts.noise.readout_p10, 0};
  const StateMode mode =
      opts.noise.has_gate_noise() ? StateMode::Density : StateMode::Pure;

  MeasuredGreens out;
  out.series.provenance = Provenance::Sampled;

  for (int k = 0; k <= n_steps; ++k) {
    const Circuit evolution = trotterized_evolution(p, k, dt);
    MeasurementRecord rec;

    for (int a = 0; a < 2; ++a) {
      Circuit head;
      head.append(prep);
      head.add(Gate::h(kAncillaQubit));
      head.add(Gate::controlled_pauli(kAncillaQubit, 1, axis_of(a), 0));
      head.append(evolution);
      auto state = QuantumState::zero(kTotalQubits, mode);
      apply_circuit(state, head, opts.noise);

      int applied = 0;
      for (std::size_t fi = 0; fi < folds.size(); ++fi) {
        for (; applied < folds[fi]; ++applied) apply_circuit(state, fold_unit, opts.noise);
        for (int b = 0; b < 2; ++b) {
          QuantumState final_state = state;
          const Gate tail = Gate::controlled_pauli(kAncillaQubit, 1, axis_of(b), 1);
          apply_circuit(final_state, std::span<const Gate>(&tail, 1), opts.noise);
          for (int basis = 0; basis < 2; ++basis) {
            const double p1 = rotated_one_probability(final_state, kAncillaQubit,
                                                      basis == 0 ? Basis::X : Basis::Y);
            double value;
            if (opts.exact_expectations) {
              value = apply_readout_model(1.0 - 2.0 * p1, forward);
            } else {
              Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(k),
                                              static_cast<std::uint64_t>(a),
                                              static_cast<std::uint64_t>(b),
                                              static_cast<std::uint64_t>(basis),
                                              static_cast<std::uint64_t>(fi)}));
              value = sample_from_probability(p1, opts.shots, opts.noise, rng);
            }
            rec.raw[a][b][basis].push_back(value);
          }
        }
      }
    }

    // Mitigation: readout correction first, then extrapolation.
    std::array<std::array<std::array<std::vector<double>, 2>, 2>, 2> corrected = rec.raw;
    if (opts.mitigation.readout) {
      for (auto& ab : corrected)
        for (auto& bb : ab)
          for (auto& vals : bb)
            for (double& v : vals) {
              bool clamped = false;
              v = correct_readout(v, *opts.mitigation.calibration, &clamped);
              rec.readout_clamped += clamped ? 1 : 0;
            }
    }

    Interferometry o;
    if (opts.mitigation.zne) {
      std::vector<std::vector<double>> rows;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int basis = 0; basis < 2; ++basis) rows.push_back(corrected[a][b][basis]);
      const int base = prep.two_qubit_count() + 2 + evolution.two_qubit_count();
      const int per_fold = fold_unit.two_qubit_count();
      const double m0 = per_fold > 0 ? static_cast<double>(base) / per_fold : 0.0;
      rec.zne = fit_exponential_decay(folds, rows, m0);
      std::size_t j = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double re = rec.zne->extrapolated[j++];
          const double im = rec.zne->extrapolated[j++];
          o[a][b] = Complex(re, im);
        }
    } else {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) o[a][b] = Complex(corrected[a][b][0][0], corrected[a][b][1][0]);
    }
    push_greens_point(out.series, k * dt, o);
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_greens_csv(std::ostream& out, const GreensSeries& s) {
  CsvWriter w(out);
  w.header({"t", "re_g_greater", "im_g_greater", "re_g_lesser", "im_g_lesser", "ig_ret", "provenance"});
  const std::string prov = provenance_name(s.provenance);
  for (std::size_t k = 0; k < s.size(); ++k) {
    w.row({s.times[k], s.g_greater[k].real(), s.g_greater[k].imag(), s.g_lesser[k].real(),
           s.g_lesser[k].imag(), s.ig_retarded[k], prov});
  }
}

}  // namespace dmftqsim
