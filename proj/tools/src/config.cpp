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

#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace dmftqsim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, v));
  }
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(key, item));
  return out;
}

std::string show(double x) { return fmt::format("{}", x); }
std::string show(bool b) { return b ? "true" : "false"; }

template <typename T>
std::string show_list(const std::vector<T>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + fmt::format("{}", x);
  return s;
}

SweepCombo parse_combo(const std::string& key, const std::string& item) {
  const auto colon = item.find(':');
  if (colon == std::string::npos) {
    throw ConfigError(fmt::format("{}: '{}' should be solver:method", key, item));
  }
  try {
    return {parse_solver(item.substr(0, colon)), parse_z_method(item.substr(colon + 1))};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

struct Field {
  std::string name;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define DOUBLE_FIELD(key, member)                                                                 \
  Field {                                                                                         \
    key, [](RunConfig& c, const std::string& k, const std::string& v) { c.member = parse_double(k, v); }, \
        [](const RunConfig& c) { return show(c.member); }                                         \
  }
#define BOOL_FIELD(key, member)                                                                   \
  Field {                                                                                         \
    key, [](RunConfig& c, const std::string& k, const std::string& v) { c.member = parse_bool(k, v); }, \
        [](const RunConfig& c) { return show(c.member); }                                         \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      DOUBLE_FIELD("u", dmft.u),
      DOUBLE_FIELD("v", dmft.v_initial),
      DOUBLE_FIELD("dt", dmft.dt),
      {"n_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.n_steps = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.dmft.n_steps); }},
      {"shots", [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.shots = parse_u64(k, v); },
       [](const RunConfig& c) { return std::to_string(c.dmft.shots); }},
      {"solver",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.dmft.solver = parse_solver(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(fmt::format("{}: {}", k, e.what()));
         }
       },
       [](const RunConfig& c) { return solver_name(c.dmft.solver); }},
      {"z_method",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.dmft.z_method = parse_z_method(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(fmt::format("{}: {}", k, e.what()));
         }
       },
       [](const RunConfig& c) { return z_method_name(c.dmft.z_method); }},
      DOUBLE_FIELD("eps2", dmft.noise.two_qubit_depolarizing),
      {"noise_scope",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "local") c.dmft.noise.scope = NoiseScope::Local;
         else if (v == "global") c.dmft.noise.scope = NoiseScope::Global;
         else throw ConfigError(fmt::format("{}: '{}' should be local or global", k, v));
       },
       [](const RunConfig& c) {
         return std::string(c.dmft.noise.scope == NoiseScope::Local ? "local" : "global");
       }},
      DOUBLE_FIELD("readout_p01", dmft.noise.readout_p01),
      DOUBLE_FIELD("readout_p10", dmft.noise.readout_p10),
      BOOL_FIELD("readout_mitigation", dmft.readout_mitigation),
      BOOL_FIELD("zne", dmft.zne),
      {"folds",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dmft.folds.clear();
         for (const auto& item : split_list(v)) c.dmft.folds.push_back(parse_int(k, item));
       },
       [](const RunConfig& c) { return show_list(c.dmft.folds); }},
      {"calibration_shots",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.calibration_shots = parse_u64(k, v); },
       [](const RunConfig& c) { return std::to_string(c.dmft.calibration_shots); }},
      DOUBLE_FIELD("v_tolerance", dmft.v_tolerance),
      DOUBLE_FIELD("v_cutoff", dmft.v_cutoff),
      {"max_iterations",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.max_iterations = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.dmft.max_iterations); }},
      DOUBLE_FIELD("mixing", dmft.mixing),
      DOUBLE_FIELD("peak_floor", dmft.peak_floor),
      DOUBLE_FIELD("omega_min", dmft.grid.lo),
      DOUBLE_FIELD("omega_max", dmft.grid.hi),
      DOUBLE_FIELD("omega_step", dmft.grid.step),
      DOUBLE_FIELD("delta", dmft.grid.delta),
      {"temperatures",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.temperatures = parse_doubles(k, v); },
       [](const RunConfig& c) { return show_list(c.dmft.temperatures); }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.dmft.seed = parse_u64(k, v); },
       [](const RunConfig& c) { return std::to_string(c.dmft.seed); }},
      {"u_list", [](RunConfig& c, const std::string& k, const std::string& v) { c.u_list = parse_doubles(k, v); },
       [](const RunConfig& c) { return show_list(c.u_list); }},
      {"sweep",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.clear();
         for (const auto& item : split_list(v)) c.sweep.push_back(parse_combo(k, item));
       },
       [](const RunConfig& c) {
         std::string s;
         for (const auto& combo : c.sweep) {
           s += (s.empty() ? "" : ",") + solver_name(combo.solver) + ":" + z_method_name(combo.method);
         }
         return s;
       }},
      {"dt_list", [](RunConfig& c, const std::string& k, const std::string& v) { c.dt_list = parse_doubles(k, v); },
       [](const RunConfig& c) { return show_list(c.dt_list); }},
      DOUBLE_FIELD("t_max", t_max),
      BOOL_FIELD("emit_spectra", emit_spectra),
      BOOL_FIELD("emit_references", emit_references),
  };
  return table;
}

#undef DOUBLE_FIELD
#undef BOOL_FIELD

const Field& find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.name == key) return f;
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

}  // namespace

std::string SweepCombo::label() const { return solver_name(solver) + ":" + z_method_name(method); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

void set_value(RunConfig& c, const std::string& key, const std::string& value) {
  find_field(key).set(c, key, trim(value));
}

std::string get_value(const RunConfig& c, const std::string& key) { return find_field(key).get(c); }

void apply_assignment(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(fmt::format("expected key=value, got '{}'", assignment));
  set_value(c, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void parse_config_text(RunConfig& c, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_assignment(c, line);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, lineno, e.what()));
    }
  }
}

void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(c, ss.str(), path);
}

std::string render_config(const RunConfig& c) {
  std::string out;
  for (const auto& f : fields()) out += fmt::format("{} = {}\n", f.name, f.get(c));
  return out;
}

}  // namespace dmftqsim::cli
