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

#include "iqfi/protocol_random.hpp"

#include <cmath>
#include <numbers>

#include "iqfi/errors.hpp"

namespace iqfi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

InitialState haar_state(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return InitialState{std::acos(1.0 - 2.0 * unit(rng)), kTwoPi * unit(rng)};
}

}  // namespace

std::vector<double> random_pulse_times(Rng& rng, std::size_t count, double T) {
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  const double segments = static_cast<double>(count + 1);
  const double min_gap = T / (10.0 * segments);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights(count + 1);
  double total = 0.0;
  for (auto& w : weights) {
    w = unit(rng) + 1e-3;
    total += w;
  }
  const double spare = T - segments * min_gap;
  std::vector<double> times;
  times.reserve(count);
  double t = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    t += min_gap + spare * weights[i] / total;
    times.push_back(t);
  }
  return times;
}

PulseSequence random_pi_train(Rng& rng, std::size_t count, double T) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PulseSequence seq;
  seq.type = "pi-train";
  seq.total_time = T;
  seq.initial_state = InitialState{std::numbers::pi / 2.0, kTwoPi * unit(rng)};
  for (double t : random_pulse_times(rng, count, T)) {
    seq.pulses.push_back(Pulse{t, Rotation::about(coin(rng) ? Axis::X : Axis::Y, std::numbers::pi)});
  }
  return seq;
}

PulseSequence random_sequence(Rng& rng, std::size_t count, double T) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PulseSequence seq;
  seq.type = "custom";
  seq.total_time = T;
  seq.initial_state = haar_state(rng);
  for (double t : random_pulse_times(rng, count, T)) {
    const double z = 1.0 - 2.0 * unit(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = kTwoPi * unit(rng);
    const double angle = kTwoPi * unit(rng);
    seq.pulses.push_back(Pulse{t, Rotation::about({r * std::cos(az), r * std::sin(az), z}, angle)});
  }
  return seq;
}

}  // namespace iqfi
