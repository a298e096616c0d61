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

#include "iqfi/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "iqfi/errors.hpp"

namespace iqfi {

std::array<double, 3> axis_vector(Axis axis) {
  switch (axis) {
    case Axis::X:
      return {1.0, 0.0, 0.0};
    case Axis::Y:
      return {0.0, 1.0, 0.0};
    case Axis::Z:
      return {0.0, 0.0, 1.0};
  }
  return {1.0, 0.0, 0.0};
}

Rotation Rotation::about(const std::array<double, 3>& axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(n > 0.0)) throw ValidationError("rotation axis must be non-zero");
  // Axes within rounding of unit length are kept verbatim so that serialized
  // sequences reproduce the same matrices.
  std::array<double, 3> unit = axis;
  if (std::abs(n - 1.0) > 1e-14) {
    unit = {axis[0] / n, axis[1] / n, axis[2] / n};
  }
  Rotation r;
  r.matrix_ = rotation(unit, angle);
  r.axis_angle_ = AxisAngle{unit, angle};
  return r;
}

Rotation Rotation::from_matrix(const Mat2& m) {
  Rotation r;
  r.matrix_ = m;
  return r;
}

bool Rotation::preserves_z_axis(double tol) const {
  const Mat2 conj = matrix_ * pauli_z() * matrix_.adjoint();
  return (conj - pauli_z()).norm() <= tol || (conj + pauli_z()).norm() <= tol;
}

std::vector<double> PulseSequence::boundaries() const {
  std::vector<double> b;
  b.reserve(pulses.size() + 2);
  b.push_back(0.0);
  for (const auto& p : pulses) b.push_back(p.time);
  b.push_back(total_time);
  return b;
}

std::size_t PulseSequence::segment_count() const {
  const auto b = boundaries();
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (b[i + 1] > b[i]) ++n;
  }
  return std::max<std::size_t>(n, 1);
}

double PulseSequence::min_segment() const {
  const auto b = boundaries();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double len = b[i + 1] - b[i];
    if (len > 0.0) best = std::min(best, len);
  }
  return std::isfinite(best) ? best : total_time;
}

bool PulseSequence::is_z_preserving() const {
  return std::all_of(pulses.begin(), pulses.end(),
                     [](const Pulse& p) { return p.rotation.preserves_z_axis(); });
}

double ContinuousControl::max_generator_norm() const {
  if (const auto* drive = std::get_if<TransverseDrive>(&kind)) return std::abs(drive->g);
  double best = 0.0;
  for (const auto& piece : std::get<PiecewiseGenerator>(kind).pieces) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(piece.generator);
    best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best;
}

double ContinuousControl::min_piece() const {
  if (std::holds_alternative<TransverseDrive>(kind)) return total_time;
  double best = total_time;
  for (const auto& piece : std::get<PiecewiseGenerator>(kind).pieces) {
    if (piece.interval.length() > 0.0) best = std::min(best, piece.interval.length());
  }
  return best;
}

std::optional<Diagnostic> validate(const PulseSequence& seq) {
  if (!(seq.total_time > 0.0) || !std::isfinite(seq.total_time)) {
    return Diagnostic{"total time must be positive", std::nullopt};
  }
  if (!std::isfinite(seq.initial_state.alpha) || !std::isfinite(seq.initial_state.beta)) {
    return Diagnostic{"initial state angles must be finite", std::nullopt};
  }
  double previous = 0.0;
  for (std::size_t i = 0; i < seq.pulses.size(); ++i) {
    const Pulse& p = seq.pulses[i];
    if (!(p.time >= 0.0) || !(p.time <= seq.total_time)) {
      return Diagnostic{"time out of range", i};
    }
    if (p.time < previous) return Diagnostic{"pulse times not non-decreasing", i};
    previous = p.time;
    if (!p.rotation.matrix().allFinite() ||
        unitarity_defect(p.rotation.matrix()) > kUnitaryTolerance) {
      return Diagnostic{"not unitary", i};
    }
    if (const auto& aa = p.rotation.axis_angle()) {
      const auto& a = aa->axis;
      const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
      if (std::abs(n - 1.0) > kUnitaryTolerance) return Diagnostic{"axis not normalized", i};
    }
  }
  return std::nullopt;
}

std::optional<Diagnostic> validate(const ContinuousControl& control) {
  const double T = control.total_time;
  if (!(T > 0.0) || !std::isfinite(T)) return Diagnostic{"total time must be positive", {}};
  if (const auto* drive = std::get_if<TransverseDrive>(&control.kind)) {
    if (!std::isfinite(drive->g)) return Diagnostic{"drive strength must be finite", {}};
    return std::nullopt;
  }
  const auto& pieces = std::get<PiecewiseGenerator>(control.kind).pieces;
  if (pieces.empty()) return Diagnostic{"piecewise generator has no pieces", {}};
  const double tol = 1e-12 * std::max(1.0, T);
  double cursor = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& piece = pieces[i];
    if (!(piece.interval.t1 >= piece.interval.t0)) return Diagnostic{"interval reversed", i};
    if (std::abs(piece.interval.t0 - cursor) > tol) {
      return Diagnostic{piece.interval.t0 > cursor ? "gap between pieces" : "overlapping pieces",
                        i};
    }
    if (!piece.generator.allFinite() || hermiticity_defect(piece.generator) > kHermitianTolerance) {
      return Diagnostic{"generator not Hermitian", i};
    }
    cursor = piece.interval.t1;
  }
  if (std::abs(cursor - T) > tol) return Diagnostic{"pieces do not reach total time", {}};
  return std::nullopt;
}

void require_valid(const PulseSequence& seq) {
  if (auto d = validate(seq)) {
    std::string msg = d->message;
    if (d->index) msg += " (pulse " + std::to_string(*d->index) + ")";
    throw ValidationError(msg);
  }
}

void require_valid(const ContinuousControl& control) {
  if (auto d = validate(control)) {
    std::string msg = d->message;
    if (d->index) msg += " (piece " + std::to_string(*d->index) + ")";
    throw ValidationError(msg);
  }
}

PulseSequence make_ramsey(double T) {
  if (!(T > 0.0)) throw ValidationError("Ramsey duration must be positive");
  PulseSequence seq;
  seq.type = "ramsey";
  seq.total_time = T;
  return seq;
}

PulseSequence make_pi_train(std::vector<double> times, Axis axis, double T) {
  if (!(T > 0.0)) throw ValidationError("pi-train duration must be positive");
  if (!std::is_sorted(times.begin(), times.end())) {
    throw OrderingError("pi-train times must be sorted");
  }
  PulseSequence seq;
  seq.type = "pi-train";
  seq.total_time = T;
  const Rotation pi = Rotation::about(axis, std::numbers::pi);
  for (double t : times) {
    if (!(t >= 0.0) || !(t <= T)) {
      throw ValidationError("pi-train time " + std::to_string(t) + " outside [0, T]");
    }
    seq.pulses.push_back({t, pi});
  }
  return seq;
}

PulseSequence make_pi2_train(double spacing, double T) {
  if (!(spacing > 0.0) || !(T > 0.0)) {
    throw ValidationError("pi/2-train spacing and duration must be positive");
  }
  const double ratio = T / spacing;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(ratio - count) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("pi/2-train spacing must divide the total time");
  }
  PulseSequence seq;
  seq.type = "pi2-train";
  seq.total_time = T;
  const auto n = static_cast<std::size_t>(count);
  const Rotation half_pi = Rotation::about(Axis::X, 0.5 * std::numbers::pi);
  for (std::size_t k = 1; k <= n; ++k) {
    // last pulse pinned to T so rounding never pushes it past the end
    const double t = (k == n) ? T : static_cast<double>(k) * spacing;
    seq.pulses.push_back({t, half_pi});
  }
  return seq;
}

PulseSequence make_trotterized_gx(double T, std::size_t m, double g) {
  if (m == 0) throw ValidationError("Trotterized gX needs at least one segment");
  if (!(T > 0.0)) throw ValidationError("Trotterized gX duration must be positive");
  PulseSequence seq;
  seq.type = "trotter-gx";
  seq.total_time = T;
  const double dt = T / static_cast<double>(m);
  const Rotation step = Rotation::about(Axis::X, 2.0 * g * dt);
  for (std::size_t k = 1; k <= m; ++k) {
    const double t = (k == m) ? T : static_cast<double>(k) * dt;
    seq.pulses.push_back({t, step});
  }
  return seq;
}

ContinuousControl make_gx(double T, double g) {
  if (!(T > 0.0)) throw ValidationError("gX duration must be positive");
  return ContinuousControl{TransverseDrive{g}, T, InitialState{}};
}

}  // namespace iqfi
