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

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqfi {

/// Panel quadrature for oscillatory integrands on [0, inf) that decay as C / w^2.
///
/// The frequency axis is cut into panels of width panel_width_factor * pi / T,
/// matched to the 2 pi / T oscillation of QFI spectra. Each panel carries a
/// 7/15-point Gauss-Kronrod pair; the worst panel is bisected until the summed
/// error estimate fits the tolerance. Beyond the cutoff Omega the integrand is
/// replaced by C / w^2 with C the mean of w^2 f over the last decade [Omega/10,
/// Omega]; Omega is doubled while the fit dispersion exceeds half the budget.
struct QuadratureConfig {
  double rel_tol = 1e-4;
  double abs_tol = 1e-12;
  double panel_width_factor = 1.0;
  double tail_start_factor = 40.0;
  std::size_t max_panels = 200000;
  bool keep_samples = true;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;   // Kronrod estimate of the integral of f
  double error = 0.0;   // |Kronrod - Gauss|
  double moment = 0.0;  // Kronrod estimate of the integral of w^2 f
  std::array<double, 15> samples{};
};

/// Final panel layout; reusable to integrate other functions on the same nodes.
struct QuadratureRule {
  std::vector<Panel> panels;  // sorted by left endpoint, contiguous
  double cutoff = 0.0;        // Omega; zero when no tail is modelled
  double decade_start = 0.0;
  double decade_mid = 0.0;
};

struct QuadratureResult {
  double integral = 0.0;
  double error_estimate = 0.0;
  double quadrature_error = 0.0;
  double tail = 0.0;
  double tail_coefficient = 0.0;
  double tail_error = 0.0;
  std::size_t evaluations = 0;
  QuadratureRule rule;

  /// Kronrod nodes and integrand values in increasing frequency.
  void samples(std::vector<double>& omegas, std::vector<double>& values) const;
};

/// Thrown when max_panels is exhausted; carries the partial result.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, QuadratureResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const QuadratureResult& partial() const { return partial_; }

 private:
  QuadratureResult partial_;
};

void validate(const QuadratureConfig& cfg);

/// Integral of f over [0, inf). time_scale sets the panel width pi / time_scale;
/// feature_rate is the largest intrinsic frequency (Omega = tail_start_factor * feature_rate).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double time_scale, double feature_rate,
                                         const QuadratureConfig& cfg);

/// Integral of f over [lo, hi] with the same panel layout and no tail.
QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo,
                                    double hi, double time_scale, const QuadratureConfig& cfg);

/// Integrates a vector-valued function (dim components) on an existing rule,
/// including the C / Omega tail fitted per component.
std::vector<double> integrate_on_rule(
    const QuadratureRule& rule, std::size_t dim,
    const std::function<void(double, std::span<double>)>& f);

/// Sum with pairwise splitting; order-stable for a given input order.
double pairwise_sum(std::span<const double> values);

}  // namespace iqfi
