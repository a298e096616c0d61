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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "iqfi/evolution.hpp"
#include "iqfi/quadrature.hpp"

namespace iqfi {

// ---- closed forms -------------------------------------------------------------

/// Ramsey IQFI at signal phase phi: 2 zeta^2 T (pi - ln 4 sin 2 phi).
double ramsey_closed_form(double T, double phi, double zeta);

/// Pi-train IQFI from Bloch polar angle alpha: 2 pi zeta^2 (tN - t0) sin^2 alpha.
double pi_train_closed_form(double t0, double tN, double alpha, double zeta);

/// Perturbative upper bound 2 pi zeta^2 T + 40 pi zeta^4 B^2 T^3.
double b0_linear_bound(double T, double B, double zeta);

/// 2 pi N zeta^2 T for N free-evolution segments.
double n_pulse_bound(std::size_t segments, double T, double zeta);

struct GhzScaling {
  double entangled = 0.0;   // 2 pi n^2 zeta^2 T
  double separable = 0.0;   // 2 pi n zeta^2 T
};
GhzScaling ghz_scaling(std::size_t n, double T, double zeta);

// ---- rotating-wave model of the transverse drive ---------------------------------

/// |+> evolved for time T under (zeta B Z + (2g - omega) X) / 2, with its
/// analytic B-derivative.
SensorState rwa_evolve(double omega, double B, double g, double T, double zeta);

/// Exact QFI of the rotating-wave model.
double rwa_qfi(double omega, double B, double g, double T, double zeta);

/// zeta^2 T^2 (g / (1 + g^2 / (zeta B)^2) + zeta B atan(g / (zeta B))).
double rwa_iqfi_lower_bound(double T, double B, double g, double zeta);

// ---- reports ------------------------------------------------------------------------

enum class CheckKind { UpperBound, LowerBound, Equality };

struct BoundReport {
  std::string name;
  CheckKind kind = CheckKind::UpperBound;
  double measured = 0.0;
  double bound_or_reference = 0.0;
  double tolerance = 0.0;  // absolute slack (bounds) or relative tolerance (equalities)
  bool satisfied = false;
  double margin = 0.0;     // relative: positive means inside the bound
};

/// measured <= bound + slack; margin (bound - measured) / |bound|.
BoundReport check_upper_bound(std::string name, double measured, double bound, double slack = 0.0);

/// measured >= bound - slack; margin (measured - bound) / |bound|.
BoundReport check_lower_bound(std::string name, double measured, double bound, double slack = 0.0);

/// |measured - reference| <= rel_tol |reference|; margin is the unused relative slack.
BoundReport check_equality(std::string name, double measured, double reference, double rel_tol);

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const std::vector<BoundReport>& reports);

// ---- battery ----------------------------------------------------------------------

struct BatteryOptions {
  std::uint64_t seed = 1;
  QuadratureConfig quadrature{};
  std::size_t jobs = 1;
  double T = 4.0;
  double zeta = 1.0;
};

/// Closed-form equalities and bounds on named and randomized protocols.
std::vector<BoundReport> run_bound_battery(const BatteryOptions& options);

}  // namespace iqfi
