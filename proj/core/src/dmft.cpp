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

#include "dmftqsim/dmft.hpp"

#include <cmath>
#include <stdexcept>

#include "dmftqsim/csv.hpp"
#include "dmftqsim/rng.hpp"

namespace dmftqsim {

namespace {

// Stream identifiers for derive_seed().
constexpr std::uint64_t kStreamCalibration = 1;
constexpr std::uint64_t kStreamIteration = 2;
constexpr std::uint64_t kStreamVariational = 3;
constexpr std::uint64_t kStreamShots = 4;

void add_flag(std::string& flags, const std::string& f) {
  if (f.empty()) return;
  if (!flags.empty()) flags += ';';
  flags += f;
}

}  // namespace

std::string z_method_name(ZMethod m) {
  switch (m) {
    case ZMethod::Derivative: return "derivative";
    case ZMethod::Spectral: return "spectral";
    case ZMethod::KramersKronig: return "kramers_kronig";
    case ZMethod::Matsubara: return "matsubara";
  }
  return "?";
}

ZMethod parse_z_method(const std::string& s) {
  for (ZMethod m : {ZMethod::Derivative, ZMethod::Spectral, ZMethod::KramersKronig, ZMethod::Matsubara}) {
    if (s == z_method_name(m)) return m;
  }
  throw std::invalid_argument("unknown z_method '" + s + "'");
}

std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::Sampled: return "sampled";
    case SolverKind::ExactTrotter: return "exact_trotter";
    case SolverKind::ExactUnitary: return "exact_unitary";
  }
  return "?";
}

SolverKind parse_solver(const std::string& s) {
  for (SolverKind k : {SolverKind::Sampled, SolverKind::ExactTrotter, SolverKind::ExactUnitary}) {
    if (s == solver_name(k)) return k;
  }
  throw std::invalid_argument("unknown solver '" + s + "'");
}

void DmftConfig::validate() const {
  if (!std::isfinite(u)) throw std::invalid_argument("u must be finite");
  if (!(v_initial >= 0.0)) throw std::invalid_argument("v_initial must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (n_steps < 4) throw std::invalid_argument("n_steps must be >= 4 (fits need 5 points)");
  if (solver == SolverKind::Sampled && shots == 0) throw std::invalid_argument("shots must be > 0");
  if (!(v_tolerance > 0.0)) throw std::invalid_argument("v_tolerance must be > 0");
  if (!(v_cutoff >= 0.0)) throw std::invalid_argument("v_cutoff must be >= 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(mixing >= 0.0 && mixing <= 1.0)) throw std::invalid_argument("mixing must be in [0, 1]");
  if (!(grid.delta > 0.0) || !(grid.step > 0.0) || !(grid.hi > grid.lo)) {
    throw std::invalid_argument("invalid frequency grid");
  }
  if (!(peak_floor >= 0.0)) throw std::invalid_argument("peak_floor must be >= 0");
  noise.validate();
}

GreensSeries solve_impurity(const DmftConfig& config, const AimParameters& p,
                            const PreparedState& prep, std::uint64_t seed,
                            const std::optional<ReadoutCalibration>& calibration) {
  switch (config.solver) {
    case SolverKind::ExactUnitary:
      return exact_greens_series(p, prep.vector, time_grid(config.n_steps, config.dt));
    case SolverKind::ExactTrotter:
      return exact_trotter_series(p, prep.vector, config.n_steps, config.dt);
    case SolverKind::Sampled: {
      MeasureOptions opts;
      opts.shots = config.shots;
      opts.noise = config.noise;
      opts.mitigation.readout = config.readout_mitigation;
      opts.mitigation.zne = config.zne;
      opts.mitigation.folds = config.folds;
      opts.mitigation.calibration = calibration;
      opts.seed = derive_seed(seed, {kStreamShots});
      return measure_greens_series(p, prep.circuit, config.n_steps, config.dt, opts).series;
    }
  }
  throw std::logic_error("unreachable solver kind");
}

ZEstimate estimate_z(const DmftConfig& config, const FitParams& fit, double v) {
  const AimParameters p = AimParameters::half_filled(config.u, v);
  switch (config.z_method) {
    case ZMethod::Spectral: {
      SpectralOptions o;
      o.delta = config.grid.delta;
      o.step = config.grid.step;
      o.peak_floor = config.peak_floor;
      o.v = v;
      return qp_weight_spectral(fit, o);
    }
    case ZMethod::Derivative:
      return qp_weight_derivative(compute_spectra(fit, p, config.grid).sigma);
    case ZMethod::KramersKronig:
      return qp_weight_kramers_kronig(compute_spectra(fit, p, config.grid).sigma);
    case ZMethod::Matsubara:
      return qp_weight_matsubara(fit, p.mu_eff(), p.v, p.eps1_minus_mu(), config.temperatures).z;
  }
  throw std::logic_error("unreachable z method");
}

DmftRecord dmft_iterate(const DmftConfig& config, double v_current, std::uint64_t seed,
                        const std::optional<ReadoutCalibration>& calibration, int iteration) {
  if (!(v_current >= 0.0)) throw std::invalid_argument("dmft_iterate: v must be >= 0");
  const AimParameters p = AimParameters::half_filled(config.u, v_current);

  DmftRecord rec;
  rec.iteration = iteration;
  rec.v_in = v_current;

  VariationalOptions vopts = config.variational;
  vopts.seed = derive_seed(seed, {kStreamVariational});
  const PreparedState prep = prepare_ground_state(p, config.v_cutoff, vopts);
  rec.prep_fidelity = prep.result.fidelity;
  if (!prep.result.converged) add_flag(rec.flags, "prep_not_converged");
  if (prep.exact_path) add_flag(rec.flags, "exact_prep");

  const GreensSeries series = solve_impurity(config, p, prep, seed, calibration);
  rec.fit = fit_time_series(series, config.dt);
  if (!rec.fit.converged) add_flag(rec.flags, "fit_not_converged");
  if (rec.fit.collapsed) add_flag(rec.flags, "single_cosine");

  try {
    rec.z = estimate_z(config, rec.fit, v_current);
  } catch (const std::invalid_argument& e) {
    rec.z = {0.0, std::numeric_limits<double>::quiet_NaN(), true, e.what()};
  }
  if (rec.z.flagged) add_flag(rec.flags, "z_" + rec.z.note);

  rec.v_out = std::sqrt(rec.z.z);
  rec.v_next = (1.0 - config.mixing) * rec.v_out + config.mixing * v_current;
  if (rec.v_next < config.v_cutoff && rec.v_next != 0.0) {
    rec.v_next = 0.0;
    rec.snapped = true;
    add_flag(rec.flags, "snapped");
  }
  return rec;
}

DmftTrace run_to_self_consistency(const DmftConfig& config) {
  config.validate();
  DmftTrace trace;
  if (config.solver == SolverKind::Sampled && config.readout_mitigation) {
    trace.calibration = calibrate_readout(config.noise, config.calibration_shots,
                                          derive_seed(config.seed, {kStreamCalibration}));
  }
  double v = config.v_initial;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto seed = derive_seed(config.seed, {kStreamIteration, static_cast<std::uint64_t>(it)});
    DmftRecord rec = dmft_iterate(config, v, seed, trace.calibration, it);
    const double next = rec.v_next;
    trace.records.push_back(std::move(rec));
    if (std::abs(next - v) < config.v_tolerance) {
      trace.converged = true;
      trace.final_v = next;
      return trace;
    }
    v = next;
  }
  trace.final_v = v;
  return trace;
}

void write_history_csv(std::ostream& out, const DmftTrace& trace) {
  CsvWriter w(out);
  w.header({"iteration", "V_in", "alpha1", "alpha2", "omega1", "omega2", "Z", "V_out", "flags"});
  for (const auto& r : trace.records) {
    w.row({std::int64_t{r.iteration}, r.v_in, r.fit.alpha1, r.fit.alpha2, r.fit.omega1,
           r.fit.omega2, r.z.z, r.v_out, r.flags});
  }
}

}  // namespace dmftqsim
