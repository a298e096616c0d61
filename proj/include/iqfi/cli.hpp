// Copyright 2026 The iqfi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iqfi/evolution.hpp"
#include "iqfi/quadrature.hpp"

namespace iqfi::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 2,
  kIntegrationFailure = 3,
  kBoundViolation = 4,
};

/// Everything a command needs; filled from flags and an optional INI file.
struct RunConfig {
  std::string protocol = "ramsey";
  std::string protocol_file;
  double T = 4.0;
  double B = 0.0;
  double zeta = 1.0;
  double phi = 0.0;
  double g = 1.5707963267948966;
  long m = 0;  // 0 selects round(2 T)
  long n = 2;
  double spacing = 0.5;
  std::string axis = "X";
  std::vector<double> times;
  double alpha = 1.5707963267948966;
  double beta = 0.0;

  double omega_min = 0.0;
  double omega_max = 10.0;
  long omega_points = 801;

  std::vector<double> Ts;
  std::vector<double> fields;
  std::vector<double> slope_window{8.0, 32.0};

  double rel_tol = 1e-4;
  std::uint64_t seed = 1;
  std::optional<long> jobs;
  std::string out;
  std::string format = "csv";
};

/// Builds the protocol named in the config.
Protocol build_protocol(const RunConfig& config);
Protocol build_protocol(const RunConfig& config, double T);

/// Writes text to path via a temporary file and rename.
void write_atomically(const std::string& path, const std::string& text);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iqfi::cli
