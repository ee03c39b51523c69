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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dmftqsim/analysis.hpp"
#include "dmftqsim/csv.hpp"
#include "dmftqsim/dmft.hpp"
#include "dmftqsim/greens.hpp"
#include "dmftqsim/ground_state.hpp"
#include "dmftqsim/mitigation.hpp"
#include "dmftqsim/rng.hpp"

namespace dmftqsim::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kStreamCalibration = 1;
constexpr std::uint64_t kStreamVariational = 3;
constexpr std::uint64_t kStreamShots = 4;
constexpr std::uint64_t kStreamSweep = 5;

class OutputDir {
 public:
  OutputDir(const std::string& dir, std::ostream& log) : dir_(dir), log_(log) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    body(out);
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
    log_ << "wrote " << path.string() << '\n';
  }

  void write_json(const std::string& name, const json& j) const {
    write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  }

 private:
  fs::path dir_;
  std::ostream& log_;
};

// NaN is not valid JSON.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const FitParams& f) {
  return {{"alpha1", number(f.alpha1)}, {"alpha2", number(f.alpha2)}, {"omega1", number(f.omega1)},
          {"omega2", number(f.omega2)}, {"residual", number(f.residual)}, {"converged", f.converged},
          {"collapsed", f.collapsed}};
}

json to_json(const ZEstimate& z) {
  return {{"z", number(z.z)}, {"raw", number(z.raw)}, {"flagged", z.flagged}, {"note", z.note}};
}

json to_json(const ReadoutCalibration& c, const NoiseModel& injected) {
  return {{"p01", c.p01},
          {"p10", c.p10},
          {"shots", c.shots},
          {"contrast", c.contrast()},
          {"injected_p01", injected.readout_p01},
          {"injected_p10", injected.readout_p10}};
}

void validate(const DmftConfig& d) {
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be
// written to per-index slots so output order does not depend on jobs.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::optional<ReadoutCalibration> maybe_calibrate(const DmftConfig& d) {
  if (d.solver != SolverKind::Sampled || !d.readout_mitigation) return std::nullopt;
  return calibrate_readout(d.noise, d.calibration_shots, derive_seed(d.seed, {kStreamCalibration}));
}

std::string observable_label(int a, int b, int basis) {
  const char* ab = "XY";
  return fmt::format("{}{}_{}", ab[a], ab[b], basis == 0 ? 'x' : 'y');
}

void write_extrapolation_csv(std::ostream& out, const MeasuredGreens& m) {
  CsvWriter w(out);
  w.header({"t", "observable", "k", "raw", "fitted", "extrapolated", "decay", "out_of_range"});
  for (std::size_t t = 0; t < m.records.size(); ++t) {
    const auto& rec = m.records[t];
    if (!rec.zne) continue;
    const auto& fit = *rec.zne;
    std::size_t j = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int basis = 0; basis < 2; ++basis, ++j) {
          for (std::size_t fi = 0; fi < fit.folds.size(); ++fi) {
            w.row({m.series.times[t], observable_label(a, b, basis), std::int64_t{fit.folds[fi]},
                   fit.raw[j][fi], fit.fitted(j, fit.folds[fi]), fit.extrapolated[j], fit.decay,
                   std::int64_t{fit.decay_out_of_range ? 1 : 0}});
          }
        }
  }
}

void write_fit_curve_csv(std::ostream& out, const GreensSeries& s, const FitParams& f) {
  CsvWriter w(out);
  w.header({"t", "ig_ret", "fit"});
  for (std::size_t k = 0; k < s.size(); ++k) w.row({s.times[k], s.ig_retarded[k], f(s.times[k])});
}

json all_z_estimates(const DmftConfig& d, const FitParams& fit, double v) {
  json z;
  for (ZMethod m : {ZMethod::Spectral, ZMethod::Derivative, ZMethod::KramersKronig, ZMethod::Matsubara}) {
    DmftConfig c = d;
    c.z_method = m;
    try {
      z[z_method_name(m)] = to_json(estimate_z(c, fit, v));
    } catch (const std::exception& e) {
      z[z_method_name(m)] = {{"z", nullptr}, {"error", e.what()}};
    }
  }
  return z;
}

void cmd_greens(const RunConfig& c, const OutputDir& out) {
  const DmftConfig& d = c.dmft;
  const auto p = AimParameters::half_filled(d.u, d.v_initial);
  VariationalOptions vopts = d.variational;
  vopts.seed = derive_seed(d.seed, {kStreamVariational});
  const PreparedState prep = prepare_ground_state(p, d.v_cutoff, vopts);

  GreensSeries series;
  if (d.solver == SolverKind::Sampled) {
    MeasureOptions opts;
    opts.shots = d.shots;
    opts.noise = d.noise;
    opts.mitigation.readout = d.readout_mitigation;
    opts.mitigation.zne = d.zne;
    opts.mitigation.folds = d.folds;
    opts.mitigation.calibration = maybe_calibrate(d);
    opts.seed = derive_seed(d.seed, {kStreamShots});
    if (opts.mitigation.calibration) {
      out.write_json("calibration.json", to_json(*opts.mitigation.calibration, d.noise));
    }
    const MeasuredGreens m = measure_greens_series(p, prep.circuit, d.n_steps, d.dt, opts);
    if (d.zne) out.write("extrapolation.csv", [&](std::ostream& o) { write_extrapolation_csv(o, m); });
    series = m.series;
  } else {
    series = solve_impurity(d, p, prep, d.seed, std::nullopt);
  }
  out.write("greens.csv", [&](std::ostream& o) { write_greens_csv(o, series); });

  if (c.emit_references) {
    const auto exact = exact_greens_series(p, prep.vector, time_grid(d.n_steps, d.dt));
    const auto trotter = exact_trotter_series(p, prep.vector, d.n_steps, d.dt);
    out.write("greens_exact.csv", [&](std::ostream& o) { write_greens_csv(o, exact); });
    out.write("greens_trotter.csv", [&](std::ostream& o) { write_greens_csv(o, trotter); });
  }

  const FitParams fit = fit_time_series(series, d.dt);
  out.write("fit_curve.csv", [&](std::ostream& o) { write_fit_curve_csv(o, series, fit); });
  json j;
  j["u"] = d.u;
  j["v"] = d.v_initial;
  j["dt"] = d.dt;
  j["n_steps"] = d.n_steps;
  j["solver"] = solver_name(d.solver);
  j["provenance"] = provenance_name(series.provenance);
  j["fit"] = to_json(fit);
  j["z"] = all_z_estimates(d, fit, d.v_initial);
  j["prep"] = {{"fidelity", number(prep.result.fidelity)},
               {"energy", number(prep.result.energy)},
               {"exact_path", prep.exact_path}};
  j["trotter_error_bound"] = d.n_steps >= 1 ? number(trotter_error_bound(p, d.n_steps, d.dt)) : json(0.0);
  out.write_json("fit.json", j);
}

void cmd_dmft(const RunConfig& c, const OutputDir& out) {
  const DmftConfig& d = c.dmft;
  const DmftTrace trace = run_to_self_consistency(d);
  out.write("dmft_history.csv", [&](std::ostream& o) { write_history_csv(o, trace); });
  if (trace.calibration) out.write_json("calibration.json", to_json(*trace.calibration, d.noise));

  json j;
  j["converged"] = trace.converged;
  j["final_v"] = trace.final_v;
  j["final_z"] = trace.final_v * trace.final_v;
  j["iterations"] = trace.records.size();
  j["solver"] = solver_name(d.solver);
  j["z_method"] = z_method_name(d.z_method);
  out.write_json("dmft_summary.json", j);

  if (c.emit_spectra && !trace.records.empty()) {
    const auto& last = trace.records.back();
    const auto spectra = compute_spectra(last.fit, AimParameters::half_filled(d.u, last.v_in), d.grid);
    out.write("spectra.csv", [&](std::ostream& o) { write_spectra_csv(o, spectra); });
  }
}

void cmd_sweep_u(const RunConfig& c, const OutputDir& out, int jobs) {
  std::vector<SweepCombo> combos = c.sweep;
  if (combos.empty()) combos.push_back({});
  if (c.u_list.empty()) throw ConfigError("u_list is empty");
  for (const auto& combo : combos) {
    DmftConfig d = c.dmft;
    d.solver = combo.solver;
    d.z_method = combo.method;
    validate(d);
  }

  struct Cell {
    double z = std::numeric_limits<double>::quiet_NaN();
    double final_v = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    std::int64_t iterations = 0;
    std::string error;
  };
  const std::size_t n_combo = combos.size();
  std::vector<Cell> cells(c.u_list.size() * n_combo);
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const double u = c.u_list[i / n_combo];
    const SweepCombo& combo = combos[i % n_combo];
    DmftConfig d = c.dmft;
    d.u = u;
    d.solver = combo.solver;
    d.z_method = combo.method;
    d.seed = derive_seed(c.dmft.seed, {kStreamSweep, std::bit_cast<std::uint64_t>(u)});
    Cell& cell = cells[i];
    try {
      const DmftTrace t = run_to_self_consistency(d);
      cell.final_v = t.final_v;
      cell.z = t.final_v * t.final_v;
      cell.converged = t.converged;
      cell.iterations = static_cast<std::int64_t>(t.records.size());
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  out.write("z_vs_u.csv", [&](std::ostream& o) {
    CsvWriter w(o);
    std::vector<std::string> head{"U"};
    for (const auto& combo : combos) head.push_back("Z_" + solver_name(combo.solver) + "_" + z_method_name(combo.method));
    w.header(head);
    for (std::size_t ui = 0; ui < c.u_list.size(); ++ui) {
      std::vector<CsvCell> row{c.u_list[ui]};
      for (std::size_t ci = 0; ci < n_combo; ++ci) row.push_back(cells[ui * n_combo + ci].z);
      w.row(row);
    }
  });
  out.write("z_vs_u_status.csv", [&](std::ostream& o) {
    CsvWriter w(o);
    w.header({"U", "combination", "converged", "iterations", "final_v", "error"});
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Cell& cell = cells[i];
      w.row({c.u_list[i / n_combo], combos[i % n_combo].label(), std::int64_t{cell.converged ? 1 : 0},
             cell.iterations, cell.final_v, cell.error});
    }
  });
}

void cmd_matsubara(const RunConfig& c, const OutputDir& out, int jobs) {
  const DmftConfig& d = c.dmft;
  if (c.dt_list.empty()) throw ConfigError("dt_list is empty");
  for (double dt : c.dt_list) {
    if (!(dt > 0.0)) throw ConfigError("dt_list entries must be > 0");
    if (std::lround(c.t_max / dt) < 4) throw ConfigError(fmt::format("t_max / dt must be >= 4 for dt = {}", dt));
  }
  const auto p = AimParameters::half_filled(d.u, d.v_initial);
  MatsubaraResult reference;
  try {
    reference = qp_weight_matsubara(lehmann_poles(p), p.mu_eff(), p.v, p.eps1_minus_mu(), d.temperatures);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.write("matsubara_exact.csv", [&](std::ostream& o) { write_matsubara_csv(o, reference); });

  VariationalOptions vopts = d.variational;
  vopts.seed = derive_seed(d.seed, {kStreamVariational});
  const PreparedState prep = prepare_ground_state(p, d.v_cutoff, vopts);
  const auto calibration = maybe_calibrate(d);

  struct Row {
    std::optional<MatsubaraResult> result;
    int n_steps = 0;
    std::string error;
  };
  std::vector<Row> rows(c.dt_list.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    DmftConfig di = d;
    di.dt = c.dt_list[i];
    di.n_steps = static_cast<int>(std::lround(c.t_max / di.dt));
    rows[i].n_steps = di.n_steps;
    try {
      const auto series = solve_impurity(di, p, prep, derive_seed(d.seed, {kStreamShots, i}), calibration);
      const auto fit = fit_time_series(series, di.dt);
      rows[i].result = qp_weight_matsubara(fit, p.mu_eff(), p.v, p.eps1_minus_mu(), d.temperatures);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].result) continue;
    out.write(fmt::format("matsubara_dt{}.csv", c.dt_list[i]),
              [&](std::ostream& o) { write_matsubara_csv(o, *rows[i].result, &reference); });
  }
  out.write("matsubara_summary.csv", [&](std::ostream& o) {
    CsvWriter w(o);
    w.header({"dt", "n_steps", "Z", "flagged", "note", "error"});
    w.row({0.0, std::int64_t{0}, reference.z.z, std::int64_t{reference.z.flagged ? 1 : 0},
           std::string("exact"), std::string()});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.result) {
        w.row({c.dt_list[i], std::int64_t{r.n_steps}, r.result->z.z,
               std::int64_t{r.result->z.flagged ? 1 : 0}, r.result->z.note, std::string()});
      } else {
        w.row({c.dt_list[i], std::int64_t{r.n_steps}, std::numeric_limits<double>::quiet_NaN(),
               std::int64_t{1}, std::string(), r.error});
      }
    }
  });
}

void cmd_calibrate(const RunConfig& c, const OutputDir& out) {
  const DmftConfig& d = c.dmft;
  ReadoutCalibration cal;
  try {
    cal = calibrate_readout(d.noise, d.calibration_shots, derive_seed(d.seed, {kStreamCalibration}));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.write_json("calibration.json", to_json(cal, d.noise));
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"greens", "dmft", "sweep-u", "matsubara", "calibrate"};
  return names;
}

void run_command(const std::string& command, const RunConfig& config, const std::string& out_dir,
                 int jobs, std::ostream& log) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
    throw ConfigError(fmt::format("unknown command '{}'", command));
  }
  validate(config.dmft);
  const OutputDir out(out_dir, log);
  out.write("resolved_config.txt", [&](std::ostream& o) { o << render_config(config); });

  if (command == "greens") cmd_greens(config, out);
  else if (command == "dmft") cmd_dmft(config, out);
  else if (command == "sweep-u") cmd_sweep_u(config, out, jobs);
  else if (command == "matsubara") cmd_matsubara(config, out, jobs);
  else cmd_calibrate(config, out);
}

}  // namespace dmftqsim::cli
