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

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace dmftqsim::cli {

const std::vector<std::string>& command_names();

// Runs one command, writing its files plus resolved_config.txt into
// out_dir. Progress goes to `log`. Throws ConfigError for invalid
// configurations; scientific non-convergence is recorded, not thrown.
void run_command(const std::string& command, const RunConfig& config, const std::string& out_dir,
                 int jobs, std::ostream& log);

}  // namespace dmftqsim::cli
