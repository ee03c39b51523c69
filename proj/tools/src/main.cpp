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

// dmftqsim command-line driver.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 1;

}  // namespace

int main(int argc, char** argv) {
  using namespace dmftqsim::cli;

  CLI::App app{"Two-site DMFT on a simulated quantum computer"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override one key (key=value), repeatable")->allow_extra_args(false);
  app.add_option("--seed", seed, "base RNG seed (falls back to DMFTQSIM_SEED)");
  app.add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");

  for (const auto& name : command_names()) {
    const char* help = name == "greens"      ? "impurity Green's function at fixed (U, V) with references"
                       : name == "dmft"      ? "self-consistency loop; history and final spectra"
                       : name == "sweep-u"   ? "Z at self-consistency versus U"
                       : name == "matsubara" ? "G and Sigma at the first Matsubara frequency per dt"
                                             : "readout calibration";
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig config;
    if (const char* env = std::getenv("DMFTQSIM_SEED"); env && *env) {
      set_value(config, "seed", env);
    }
    if (!config_path.empty()) load_config_file(config, config_path);
    for (const auto& o : overrides) apply_assignment(config, o);
    if (seed) config.dmft.seed = *seed;
    run_command(command, config, out_dir, jobs, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "dmftqsim: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "dmftqsim: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
