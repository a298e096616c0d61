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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iqfi/linalg.hpp"
#include "iqfi/signal.hpp"

namespace iqfi {

inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

enum class Axis { X, Y, Z };

std::array<double, 3> axis_vector(Axis axis);

struct AxisAngle {
  std::array<double, 3> axis{1.0, 0.0, 0.0};
  double angle = 0.0;
};

/// An SU(2) element, remembered either as an axis-angle pair or as a raw matrix.
class Rotation {
 public:
  Rotation() : matrix_(Mat2::Identity()) {}

  static Rotation about(const std::array<double, 3>& axis, double angle);
  static Rotation about(Axis axis, double angle) { return about(axis_vector(axis), angle); }
  static Rotation from_matrix(const Mat2& m);

  [[nodiscard]] const Mat2& matrix() const { return matrix_; }
  [[nodiscard]] const std::optional<AxisAngle>& axis_angle() const { return axis_angle_; }

  /// True when U Z U^dagger = +-Z, i.e. the pulse preserves |<Z>|.
  [[nodiscard]] bool preserves_z_axis(double tol = 1e-12) const;

 private:
  Mat2 matrix_;
  std::optional<AxisAngle> axis_angle_;
};

struct Pulse {
  double time = 0.0;
  Rotation rotation;
};

/// Bloch angles of cos(alpha/2)|0> + e^{i beta} sin(alpha/2)|1>; default |+>.
struct InitialState {
  double alpha = 1.5707963267948966;
  double beta = 0.0;

  [[nodiscard]] Vec2 vector() const { return bloch_state(alpha, beta); }
};

/// Instantaneous pulses interleaved with free evolution on [0, T].
///
/// Pulses sharing a time are applied in list order. A pulse at t = 0 acts on
/// the initial state before any free evolution.
struct PulseSequence {
  std::string type = "custom";
  std::vector<Pulse> pulses;
  double total_time = 0.0;
  InitialState initial_state;

  /// 0, the pulse times and T, in order (duplicates kept).
  [[nodiscard]] std::vector<double> boundaries() const;
  /// Number of free-evolution segments of positive length.
  [[nodiscard]] std::size_t segment_count() const;
  /// Shortest positive segment length (T for an empty sequence).
  [[nodiscard]] double min_segment() const;
  /// Every pulse preserves the Z axis up to sign (pi pulses, Z rotations, ...).
  [[nodiscard]] bool is_z_preserving() const;
};

struct TransverseDrive {
  double g = 0.0;  // rad/s; control Hamiltonian g X
};

struct GeneratorPiece {
  TimeInterval interval;
  Mat2 generator = Mat2::Zero();  // Hermitian, rad/s
};

struct PiecewiseGenerator {
  std::vector<GeneratorPiece> pieces;
};

/// Continuous control G(t) added to the signal coupling over [0, T].
struct ContinuousControl {
  std::variant<TransverseDrive, PiecewiseGenerator> kind;
  double total_time = 0.0;
  InitialState initial_state;

  /// Largest spectral radius of the control generator (g for a transverse drive).
  [[nodiscard]] double max_generator_norm() const;
  /// Shortest constant piece (T for a transverse drive).
  [[nodiscard]] double min_piece() const;
};

struct Diagnostic {
  std::string message;
  std::optional<std::size_t> index;  // offending pulse or piece
};

/// First invariant violation, or nullopt when the sequence is valid.
std::optional<Diagnostic> validate(const PulseSequence& seq);
std::optional<Diagnostic> validate(const ContinuousControl& control);

/// Throws ValidationError carrying the diagnostic message.
void require_valid(const PulseSequence& seq);
void require_valid(const ContinuousControl& control);

PulseSequence make_ramsey(double T);
PulseSequence make_pi_train(std::vector<double> times, Axis axis, double T);
PulseSequence make_pi2_train(double spacing, double T);

/// m free segments of length T/m, each followed by exp(-i g X T/m), i.e. an
/// X rotation by angle 2 g T/m. g = pi/2 gives the "T pi / m" convention.
PulseSequence make_trotterized_gx(double T, std::size_t m, double g);

ContinuousControl make_gx(double T, double g);

}  // namespace iqfi
