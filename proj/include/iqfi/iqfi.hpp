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
#include <functional>
#include <string>
#include <vector>

#include "iqfi/evolution.hpp"
#include "iqfi/quadrature.hpp"

namespace iqfi {

/// Sampled J(B|w) with the integrated value K = int_0^inf J dw.
struct QfiSpectrum {
  std::vector<double> omegas;  // strictly increasing, rad/s
  std::vector<double> values;  // J >= 0
  double integral = 0.0;
  double error_estimate = 0.0;
  double tail_coefficient = 0.0;  // C in J ~ C / w^2
  double tail = 0.0;              // C / Omega
  double cutoff = 0.0;            // Omega
  std::size_t evaluations = 0;
};

/// Highest intrinsic frequency of a protocol under the given signal; the
/// quadrature cutoff is tail_start_factor times this rate.
double feature_rate(const Protocol& protocol, const SignalParams& signal);

/// K(T) over [0, inf). signal.omega is ignored. Throws IntegrationError when
/// max_panels is exhausted.
QfiSpectrum integrate_iqfi(const Protocol& protocol, const SignalParams& signal,
                           const QuadratureConfig& cfg = {}, const OdeOptions& ode = {});

/// int_lo^hi J dw, without a tail model.
QfiSpectrum integrate_band(const Protocol& protocol, const SignalParams& signal, double lo,
                           double hi, const QuadratureConfig& cfg = {},
                           const OdeOptions& ode = {});

/// J on a uniform grid of `points` frequencies in [lo, hi]; no integral.
QfiSpectrum sample_spectrum(const Protocol& protocol, const SignalParams& signal, double lo,
                            double hi, std::size_t points, std::size_t jobs = 1,
                            const OdeOptions& ode = {});

// ---- cross-spectral identity -------------------------------------------------

/// int_0^inf sin(w t1) sin(w t0) / w^2 dw = (pi / 2) min(t1, t0).
double cross_spectral_integral(double t1, double t0);

/// The same integral by panel quadrature.
QuadratureResult cross_spectral_numeric(double t1, double t0, const QuadratureConfig& cfg = {});

// ---- Haar average ---------------------------------------------------------------

inline constexpr std::uint64_t kDefaultHaarSeed = 20240917;

struct HaarOptions {
  std::size_t samples = 4096;
  std::uint64_t seed = kDefaultHaarSeed;
  double max_relative_std_error = 0.01;  // Monte Carlo convergence target
};

struct HaarResult {
  double value = 0.0;
  double std_error = 0.0;
  std::string method;  // "analytic-alpha" or "monte-carlo"
  std::size_t samples = 0;
  bool converged = true;
};

/// IQFI averaged over Haar-random initial states. Sequences whose pulses all
/// preserve the Z axis satisfy K(alpha, beta) = sin^2(alpha) K(pi/2, 0) and are
/// averaged exactly (<sin^2 alpha> = 2/3); others use seeded Monte Carlo.
HaarResult haar_average_iqfi(const PulseSequence& seq, const SignalParams& signal,
                             const QuadratureConfig& cfg = {}, const HaarOptions& options = {});

// ---- sweeps ----------------------------------------------------------------------

using ProtocolFamily = std::function<Protocol(double T)>;

struct SweepPoint {
  double T = 0.0;
  double K = 0.0;
  double K_err = 0.0;
  bool ok = false;
  std::string message;  // failure reason when !ok
};

/// K(T) for each T (strictly increasing). Per-point failures are recorded.
std::vector<SweepPoint> sweep_iqfi_vs_T(const ProtocolFamily& family,
                                        const std::vector<double>& Ts,
                                        const SignalParams& signal,
                                        const QuadratureConfig& cfg = {}, std::size_t jobs = 1,
                                        const OdeOptions& ode = {});

/// Least-squares slope of log K against log T over successful points with
/// T in [t_lo, t_hi]. Throws ValidationError with fewer than two points.
double fit_loglog_slope(const std::vector<SweepPoint>& points, double t_lo, double t_hi);

/// Slope of log K between each point and its predecessor (NaN for the first).
std::vector<double> local_slopes(const std::vector<SweepPoint>& points);

// ---- export ----------------------------------------------------------------------

inline constexpr const char* kCsvVersionLine = "# iqfi-lab v1";

/// Round-trip decimal form ("%.17g"); "nan" for NaN.
std::string format_number(double v);

std::string spectrum_csv(const QfiSpectrum& spectrum);
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace iqfi
