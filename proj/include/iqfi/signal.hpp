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

#include <span>
#include <vector>

namespace iqfi {

/// A monochromatic signal B cos(omega t + phi) coupled to the sensor through zeta.
///
/// All frequencies are angular (rad/s), times are in seconds and hbar = 1, so
/// zeta * B is the instantaneous Z-precession rate at the signal maximum.
struct SignalParams {
  double B = 0.0;
  double omega = 0.0;
  double phi = 0.0;
  double zeta = 1.0;

  /// Throws ValidationError unless omega >= 0, zeta > 0 and phi in [0, 2 pi).
  void validate() const;

  [[nodiscard]] SignalParams with_omega(double w) const {
    SignalParams s = *this;
    s.omega = w;
    return s;
  }
  [[nodiscard]] SignalParams with_field(double field) const {
    SignalParams s = *this;
    s.B = field;
    return s;
  }
};

struct TimeInterval {
  double t0 = 0.0;
  double t1 = 0.0;

  void validate() const;
  [[nodiscard]] double length() const { return t1 - t0; }
};

/// Below this value of |omega| * max(t0, t1) theta() switches to its Taylor series.
inline constexpr double kSmallOmegaThreshold = 1e-4;

/// Accumulated signal phase over a free-evolution interval,
/// (sin(omega t1 + phi) - sin(omega t0 + phi)) / omega, with the DC limit
/// (t1 - t0) cos(phi) at omega = 0.
double theta(const TimeInterval& interval, const SignalParams& signal);

/// theta over consecutive segments [times[i], times[i+1]].
/// Throws OrderingError if the times decrease anywhere.
std::vector<double> theta_vector(std::span<const double> times, const SignalParams& signal);

}  // namespace iqfi
