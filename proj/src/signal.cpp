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

#include "iqfi/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "iqfi/errors.hpp"

namespace iqfi {

void SignalParams::validate() const {
  if (!std::isfinite(B) || !std::isfinite(omega) || !std::isfinite(phi) || !std::isfinite(zeta)) {
    throw ValidationError("signal parameters must be finite");
  }
  if (omega < 0.0) throw ValidationError("signal frequency omega must be >= 0");
  if (zeta <= 0.0) throw ValidationError("coupling zeta must be > 0");
  if (phi < 0.0 || phi >= 2.0 * std::numbers::pi) {
    throw ValidationError("signal phase phi must lie in [0, 2pi)");
  }
}

void TimeInterval::validate() const {
  if (!(t0 >= 0.0) || !(t1 >= t0)) {
    throw ValidationError("time interval requires 0 <= t0 <= t1, got [" + std::to_string(t0) +
                          ", " + std::to_string(t1) + "]");
  }
}

double theta(const TimeInterval& interval, const SignalParams& signal) {
  const double t0 = interval.t0;
  const double t1 = interval.t1;
  const double w = signal.omega;
  const double dt = t1 - t0;
  const double c = std::cos(signal.phi);
  const double s = std::sin(signal.phi);

  if (std::abs(w) * std::max(std::abs(t0), std::abs(t1)) < kSmallOmegaThreshold) {
    // Taylor expansion of sin(w t + phi) about w = 0; differences of powers
    // are factored so that short intervals do not cancel.
    const double d2 = dt * (t1 + t0);
    const double d3 = dt * (t1 * t1 + t1 * t0 + t0 * t0);
    const double d4 = d2 * (t1 * t1 + t0 * t0);
    return dt * c - w * d2 * s / 2.0 - w * w * d3 * c / 6.0 + w * w * w * d4 * s / 24.0;
  }

  // sin a - sin b = 2 cos((a+b)/2) sin((a-b)/2)
  const double mid = 0.5 * w * (t1 + t0) + signal.phi;
  return 2.0 * std::cos(mid) * std::sin(0.5 * w * dt) / w;
}

std::vector<double> theta_vector(std::span<const double> times, const SignalParams& signal) {
  std::vector<double> out;
  if (times.size() < 2) return out;
  out.reserve(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (times[i + 1] < times[i]) {
      throw OrderingError("segment boundaries must be non-decreasing (index " +
                          std::to_string(i + 1) + ")");
    }
    out.push_back(theta({times[i], times[i + 1]}, signal));
  }
  return out;
}

}  // namespace iqfi
