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

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace dmftqsim {

/// One CSV field. Doubles are written with 17 significant digits so that
/// files round-trip exactly.
using CsvCell = std::variant<double, std::int64_t, std::string>;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ostream& out_;
};

/// Shortest text for a double that is still exact ("{:.17g}").
std::string format_double(double x);

}  // namespace dmftqsim
