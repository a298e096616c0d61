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
#include <random>
#include <vector>

#include "iqfi/protocol.hpp"

namespace iqfi {

using Rng = std::mt19937_64;

/// `count` sorted pulse times in (0, T) whose count + 1 gaps (including the
/// final one up to T) are all at least T / (10 (count + 1)).
std::vector<double> random_pulse_times(Rng& rng, std::size_t count, double T);

/// Pi pulses about randomly chosen X or Y axes, initial state on the equator
/// with a random azimuth.
PulseSequence random_pi_train(Rng& rng, std::size_t count, double T);

/// Arbitrary rotations (uniform axis on the sphere, uniform angle) at random
/// times, from a Haar-random initial state.
PulseSequence random_sequence(Rng& rng, std::size_t count, double T);

}  // namespace iqfi
