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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmftqsim/dmft.hpp"

namespace dmftqsim::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One sweep column: solver plus Z method.
struct SweepCombo {
  SolverKind solver = SolverKind::ExactUnitary;
  ZMethod method = ZMethod::Spectral;

  std::string label() const;
};

struct RunConfig {
  DmftConfig dmft;
  std::vector<double> u_list{0.0, 2.0, 4.0, 5.0, 6.5, 8.0, 10.0};
  std::vector<SweepCombo> sweep;  // empty means exact_unitary:spectral
  std::vector<double> dt_list{0.5, 0.1, 0.01};
  double t_max = 6.0;        // matsubara: series length per dt
  bool emit_spectra = true;  // dmft: final spectra.csv
  bool emit_references = true;  // greens: exact and exact-Trotter series
};

// Registered keys in echo order.
const std::vector<std::string>& config_keys();

// Sets one key; unknown keys and malformed values throw ConfigError.
void set_value(RunConfig& c, const std::string& key, const std::string& value);
std::string get_value(const RunConfig& c, const std::string& key);

// "key=value" or "key = value".
void apply_assignment(RunConfig& c, const std::string& assignment);

// key = value lines; '#' starts a comment.
void load_config_file(RunConfig& c, const std::string& path);
void parse_config_text(RunConfig& c, const std::string& text, const std::string& origin);

// Resolved configuration in loadable form.
std::string render_config(const RunConfig& c);

}  // namespace dmftqsim::cli
