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
#include <functional>
#include <variant>

#include "iqfi/linalg.hpp"
#include "iqfi/protocol.hpp"
#include "iqfi/signal.hpp"

namespace iqfi {

/// Final sensor state |psi> together with its field derivative d|psi>/dB.
struct SensorState {
  Vec2 psi = Vec2::Zero();
  Vec2 dpsi = Vec2::Zero();
  double B = 0.0;
  double omega = 0.0;
  double T = 0.0;
  double norm_drift = 0.0;  // |1 - ||psi||| before renormalization (continuous only)
};

/// Total unitary U(T) and its derivative dU/dB.
struct Propagator {
  Mat2 U = Mat2::Identity();
  Mat2 dU = Mat2::Zero();
};

/// n-qubit GHZ probe reduced to span{|0...0>, |1...1>}.
///
/// Only collective pulses that map the subspace to itself (U Z U^dagger = +-Z
/// on every qubit) are representable; the sequence's initial state is read in
/// the reduced basis, so the default |+> is the GHZ state.
struct GhzProtocol {
  std::size_t n = 1;
  PulseSequence sequence;
};

struct GhzState {
  std::size_t n = 1;
  double accumulated_phase = 0.0;  // signed sum of theta over segments
  Vec2 psi = Vec2::Zero();         // reduced basis
  Vec2 dpsi = Vec2::Zero();
};

using Protocol = std::variant<PulseSequence, ContinuousControl, GhzProtocol>;

double total_time(const Protocol& protocol);

// ---- Discrete protocols ---------------------------------------------------

/// Exact forward pass over free segments and pulses.
Propagator propagate(const PulseSequence& seq, const SignalParams& signal);

/// Throws ValidationError for an invalid sequence.
SensorState evolve_discrete(const PulseSequence& seq, const SignalParams& signal);

// ---- Continuous protocols -------------------------------------------------

struct OdeOptions {
  double tol = 1e-10;          // local error per step
  double min_step_ratio = 1e-13;  // smallest admissible step as a fraction of T
};

/// Integrates d/dt [psi; dpsi] = -i [H psi; H dpsi + zeta cos(w t + phi) Z psi]
/// with H = G(t) + zeta B cos(w t + phi) Z, using classic RK4 with step
/// doubling. Throws StiffnessError on step underflow.
SensorState evolve_continuous(const ContinuousControl& control, const SignalParams& signal,
                              const OdeOptions& options = {});

// ---- GHZ probes -------------------------------------------------------------

GhzState evolve_ghz(const GhzProtocol& protocol, const SignalParams& signal);
double qfi(const GhzState& state);

// ---- QFI --------------------------------------------------------------------

/// Pure-state QFI 4(<dpsi|dpsi> + Re(<dpsi|psi>^2)), floored at zero.
double qfi(const Vec2& psi, const Vec2& dpsi);
double qfi(const SensorState& state);

/// Final state of any protocol at the given signal (initial state from the protocol).
SensorState evolve(const Protocol& protocol, const SignalParams& signal,
                   const OdeOptions& options = {});

/// Propagator of any protocol; for GHZ probes it acts on the reduced basis.
Propagator propagator(const Protocol& protocol, const SignalParams& signal,
                      const OdeOptions& options = {});

/// QFI of any protocol at one signal frequency.
double qfi_at(const Protocol& protocol, const SignalParams& signal,
              const OdeOptions& options = {});

/// J(omega) for a fixed protocol and signal template. The protocol is
/// validated once here; the returned closure skips per-call validation.
std::function<double(double)> qfi_spectrum_function(const Protocol& protocol,
                                                    const SignalParams& signal,
                                                    const OdeOptions& options = {});

// ---- Finite-difference oracle ------------------------------------------------

struct FdOptions {
  double step = 0.0;  // 0 selects 1e-6 * max(1, |B|)
  /// Continuous protocols are integrated on this many fixed RK4 steps so that
  /// psi(B + h) and psi(B - h) share one time grid.
  std::size_t fixed_steps = 0;  // 0 selects an automatic grid
  double richardson_tolerance = 1e-4;
};

struct FdQfi {
  double qfi = 0.0;           // Richardson-extrapolated central difference
  double qfi_central = 0.0;   // plain central difference with the full step
  double disagreement = 0.0;  // relative |qfi - qfi_central|
  bool step_too_large = false;
};

/// QFI with d|psi>/dB replaced by central differences of the final state.
/// Used to check the analytic derivative; independent of the derivative path.
FdQfi qfi_fd_oracle(const Protocol& protocol, const SignalParams& signal,
                    const FdOptions& options = {});

}  // namespace iqfi
