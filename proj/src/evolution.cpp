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

#include "iqfi/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iqfi/errors.hpp"

namespace iqfi {

namespace {

const cplx kMinusI(0.0, -1.0);

// Applies free evolution exp(-i scale zeta B theta Z) and its B-derivative to
// (x, dx) in place. Works column-wise, so x may be a state or a propagator.
template <class M>
void free_step(double theta_value, double scale, const SignalParams& signal, M& x, M& dx) {
  if (theta_value == 0.0) return;
  const double kappa = scale * signal.zeta * signal.B * theta_value;
  const cplx a = std::polar(1.0, -kappa);
  const cplx ac = std::conj(a);
  x.row(0) *= a;
  x.row(1) *= ac;
  dx.row(0) *= a;
  dx.row(1) *= ac;
  const cplx coeff = kMinusI * (scale * signal.zeta * theta_value);
  dx.row(0) += coeff * x.row(0);
  dx.row(1) -= coeff * x.row(1);
}

template <class M, class PulseMap>
void forward_pass(const PulseSequence& seq, const SignalParams& signal, double scale,
                  PulseMap&& pulse_matrix, M& x, M& dx) {
  double t = 0.0;
  for (const auto& pulse : seq.pulses) {
    free_step(theta({t, pulse.time}, signal), scale, signal, x, dx);
    const Mat2 p = pulse_matrix(pulse.rotation);
    x = (p * x).eval();
    dx = (p * dx).eval();
    t = pulse.time;
  }
  free_step(theta({t, seq.total_time}, signal), scale, signal, x, dx);
}

const Mat2& identity_map(const Rotation& r) { return r.matrix(); }

// Collective pulse U^{(x)n} restricted to span{|0..0>, |1..1>}.
Mat2 collective_pulse(const Rotation& r, std::size_t n) {
  if (!r.preserves_z_axis()) {
    throw ValidationError("GHZ evolution supports only collective Z-preserving pulses");
  }
  const Mat2& u = r.matrix();
  const double k = static_cast<double>(n);
  Mat2 out = Mat2::Zero();
  if (std::abs(u(0, 0)) >= std::abs(u(0, 1))) {
    out(0, 0) = std::pow(u(0, 0), k);
    out(1, 1) = std::pow(u(1, 1), k);
  } else {
    out(0, 1) = std::pow(u(0, 1), k);
    out(1, 0) = std::pow(u(1, 0), k);
  }
  return out;
}

// ---- continuous integration --------------------------------------------------

using Vec4 = Eigen::Matrix<cplx, 4, 1>;

struct Rhs {
  Mat2 generator;
  const SignalParams* signal;

  Vec4 operator()(double t, const Vec4& y) const {
    const double c = std::cos(signal->omega * t + signal->phi);
    const double hz = signal->zeta * signal->B * c;
    Mat2 h = generator;
    h(0, 0) += hz;
    h(1, 1) -= hz;
    const Vec2 psi = y.head<2>();
    const Vec2 dpsi = y.tail<2>();
    Vec4 out;
    out.head<2>() = kMinusI * (h * psi);
    Vec2 src = h * dpsi;
    const double zc = signal->zeta * c;
    src(0) += zc * psi(0);
    src(1) -= zc * psi(1);
    out.tail<2>() = kMinusI * src;
    return out;
  }
};

Vec4 rk4_step(const Rhs& f, double t, const Vec4& y, double h) {
  const Vec4 k1 = f(t, y);
  const Vec4 k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec4 k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec4 k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Piece {
  double t0;
  double t1;
  Mat2 generator;
};

std::vector<Piece> pieces_of(const ContinuousControl& control) {
  std::vector<Piece> out;
  if (const auto* drive = std::get_if<TransverseDrive>(&control.kind)) {
    out.push_back({0.0, control.total_time, drive->g * pauli_x()});
  } else {
    for (const auto& p : std::get<PiecewiseGenerator>(control.kind).pieces) {
      if (p.interval.length() > 0.0) out.push_back({p.interval.t0, p.interval.t1, p.generator});
    }
  }
  return out;
}

double initial_step(const ContinuousControl& control, const SignalParams& signal) {
  double h = control.total_time;
  if (signal.omega > 0.0) h = std::min(h, 2.0 * std::numbers::pi / signal.omega);
  const double g = control.max_generator_norm();
  if (g > 0.0) h = std::min(h, 1.0 / g);
  const double zb = std::abs(signal.zeta * signal.B);
  if (zb > 0.0) h = std::min(h, 1.0 / zb);
  return h / 50.0;
}

Vec4 integrate_adaptive(const ContinuousControl& control, const SignalParams& signal,
                        const OdeOptions& options, Vec4 y) {
  const double T = control.total_time;
  const double h_min = options.min_step_ratio * T;
  double h = initial_step(control, signal);
  for (const Piece& piece : pieces_of(control)) {
    const Rhs f{piece.generator, &signal};
    double t = piece.t0;
    while (t < piece.t1) {
      bool last = false;
      double step = h;
      if (t + step >= piece.t1) {
        step = piece.t1 - t;
        last = true;
      }
      const Vec4 full = rk4_step(f, t, y, step);
      const Vec4 half = rk4_step(f, t, y, 0.5 * step);
      const Vec4 two_half = rk4_step(f, t + 0.5 * step, half, 0.5 * step);
      const Vec4 diff = (two_half - full) / 15.0;
      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        err = std::max(err, std::abs(diff(i)) / (1.0 + std::abs(two_half(i))));
      }
      if (err <= options.tol) {
        y = two_half + diff;  // local extrapolation
        t = last ? piece.t1 : t + step;
      }
      const double factor =
          err > 0.0 ? std::clamp(0.9 * std::pow(options.tol / err, 0.2), 0.2, 4.0) : 4.0;
      // a truncated final step says nothing about the natural step size
      if (!(last && err <= options.tol)) h = step * factor;
      if (h < h_min) {
        throw StiffnessError("adaptive step underflow at t = " + std::to_string(t));
      }
    }
  }
  return y;
}

// psi-only fixed-grid RK4, used by the finite-difference oracle.
Vec2 integrate_fixed(const ContinuousControl& control, const SignalParams& signal,
                     std::size_t steps_hint, const Vec2& psi0) {
  const double T = control.total_time;
  double rate = std::max({signal.omega, control.max_generator_norm(),
                          std::abs(signal.zeta * signal.B), 1.0 / T});
  const double h_target =
      steps_hint > 0 ? T / static_cast<double>(steps_hint) : 2.0 * std::numbers::pi / rate / 400.0;
  Vec2 psi = psi0;
  for (const Piece& piece : pieces_of(control)) {
    const auto n = static_cast<std::size_t>(std::ceil((piece.t1 - piece.t0) / h_target));
    const double h = (piece.t1 - piece.t0) / static_cast<double>(std::max<std::size_t>(n, 1));
    auto f = [&](double t, const Vec2& v) {
      const double hz = signal.zeta * signal.B * std::cos(signal.omega * t + signal.phi);
      Mat2 hm = piece.generator;
      hm(0, 0) += hz;
      hm(1, 1) -= hz;
      return Vec2(kMinusI * (hm * v));
    };
    for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
      const double t = piece.t0 + static_cast<double>(k) * h;
      const Vec2 k1 = f(t, psi);
      const Vec2 k2 = f(t + 0.5 * h, psi + 0.5 * h * k1);
      const Vec2 k3 = f(t + 0.5 * h, psi + 0.5 * h * k2);
      const Vec2 k4 = f(t + h, psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return psi;
}

Vec2 final_state_for_fd(const Protocol& protocol, const SignalParams& signal,
                        const FdOptions& options) {
  if (const auto* seq = std::get_if<PulseSequence>(&protocol)) {
    return evolve_discrete(*seq, signal).psi;
  }
  if (const auto* ghz = std::get_if<GhzProtocol>(&protocol)) {
    return evolve_ghz(*ghz, signal).psi;
  }
  const auto& control = std::get<ContinuousControl>(protocol);
  return integrate_fixed(control, signal, options.fixed_steps, control.initial_state.vector());
}

}  // namespace

double total_time(const Protocol& protocol) {
  return std::visit(
      [](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GhzProtocol>) {
          return p.sequence.total_time;
        } else {
          return p.total_time;
        }
      },
      protocol);
}

Propagator propagate(const PulseSequence& seq, const SignalParams& signal) {
  Propagator out;
  forward_pass(seq, signal, 1.0, identity_map, out.U, out.dU);
  return out;
}

SensorState evolve_discrete(const PulseSequence& seq, const SignalParams& signal) {
  require_valid(seq);
  SensorState s;
  s.psi = seq.initial_state.vector();
  s.dpsi = Vec2::Zero();
  forward_pass(seq, signal, 1.0, identity_map, s.psi, s.dpsi);
  s.B = signal.B;
  s.omega = signal.omega;
  s.T = seq.total_time;
  return s;
}

SensorState evolve_continuous(const ContinuousControl& control, const SignalParams& signal,
                              const OdeOptions& options) {
  require_valid(control);
  if (!(options.tol > 0.0)) throw ValidationError("ODE tolerance must be positive");
  Vec4 y = Vec4::Zero();
  y.head<2>() = control.initial_state.vector();
  y = integrate_adaptive(control, signal, options, y);

  SensorState s;
  s.psi = y.head<2>();
  s.dpsi = y.tail<2>();
  const double norm = s.psi.norm();
  s.norm_drift = std::abs(norm - 1.0);
  s.psi /= norm;
  s.dpsi /= norm;
  // restore Re<psi|dpsi> = 0 after renormalization
  s.dpsi -= s.psi.dot(s.dpsi).real() * s.psi;
  s.B = signal.B;
  s.omega = signal.omega;
  s.T = control.total_time;
  return s;
}

GhzState evolve_ghz(const GhzProtocol& protocol, const SignalParams& signal) {
  if (protocol.n < 1) throw ValidationError("GHZ probe needs at least one qubit");
  require_valid(protocol.sequence);
  const std::size_t n = protocol.n;
  GhzState s;
  s.n = n;
  s.psi = protocol.sequence.initial_state.vector();
  s.dpsi = Vec2::Zero();
  forward_pass(
      protocol.sequence, signal, static_cast<double>(n),
      [n](const Rotation& r) { return collective_pulse(r, n); }, s.psi, s.dpsi);

  // Signed phase: each subspace-swapping pulse flips the sign of later segments.
  double sign = 1.0;
  double t = 0.0;
  for (const auto& pulse : protocol.sequence.pulses) {
    s.accumulated_phase += sign * theta({t, pulse.time}, signal);
    const Mat2& u = pulse.rotation.matrix();
    if (std::abs(u(0, 1)) > std::abs(u(0, 0))) sign = -sign;
    t = pulse.time;
  }
  s.accumulated_phase += sign * theta({t, protocol.sequence.total_time}, signal);
  return s;
}

double qfi(const GhzState& state) { return qfi(state.psi, state.dpsi); }

double qfi(const Vec2& psi, const Vec2& dpsi) {
  const double norm2 = dpsi.squaredNorm();
  const cplx overlap = dpsi.dot(psi);  // <dpsi|psi>
  const double j = 4.0 * (norm2 + (overlap * overlap).real());
  return std::max(0.0, j);
}

double qfi(const SensorState& state) { return qfi(state.psi, state.dpsi); }

SensorState evolve(const Protocol& protocol, const SignalParams& signal,
                   const OdeOptions& options) {
  if (const auto* seq = std::get_if<PulseSequence>(&protocol)) {
    return evolve_discrete(*seq, signal);
  }
  if (const auto* control = std::get_if<ContinuousControl>(&protocol)) {
    return evolve_continuous(*control, signal, options);
  }
  const auto& ghz = std::get<GhzProtocol>(protocol);
  const GhzState g = evolve_ghz(ghz, signal);
  SensorState s;
  s.psi = g.psi;
  s.dpsi = g.dpsi;
  s.B = signal.B;
  s.omega = signal.omega;
  s.T = ghz.sequence.total_time;
  return s;
}

Propagator propagator(const Protocol& protocol, const SignalParams& signal,
                      const OdeOptions& options) {
  Propagator out;
  if (const auto* seq = std::get_if<PulseSequence>(&protocol)) {
    require_valid(*seq);
    forward_pass(*seq, signal, 1.0, identity_map, out.U, out.dU);
  } else if (const auto* ghz = std::get_if<GhzProtocol>(&protocol)) {
    require_valid(ghz->sequence);
    const std::size_t n = ghz->n;
    forward_pass(
        ghz->sequence, signal, static_cast<double>(n),
        [n](const Rotation& r) { return collective_pulse(r, n); }, out.U, out.dU);
  } else {
    const auto& control = std::get<ContinuousControl>(protocol);
    require_valid(control);
    for (int col = 0; col < 2; ++col) {
      Vec4 y = Vec4::Zero();
      y(col) = 1.0;
      y = integrate_adaptive(control, signal, options, y);
      out.U.col(col) = y.head<2>();
      out.dU.col(col) = y.tail<2>();
    }
  }
  return out;
}

double qfi_at(const Protocol& protocol, const SignalParams& signal, const OdeOptions& options) {
  return qfi(evolve(protocol, signal, options));
}

std::function<double(double)> qfi_spectrum_function(const Protocol& protocol,
                                                    const SignalParams& signal,
                                                    const OdeOptions& options) {
  signal.validate();
  if (const auto* seq = std::get_if<PulseSequence>(&protocol)) {
    require_valid(*seq);
    return [seq = *seq, signal, psi0 = seq->initial_state.vector()](double w) {
      Vec2 psi = psi0;
      Vec2 dpsi = Vec2::Zero();
      forward_pass(seq, signal.with_omega(w), 1.0, identity_map, psi, dpsi);
      return qfi(psi, dpsi);
    };
  }
  if (const auto* ghz = std::get_if<GhzProtocol>(&protocol)) {
    evolve_ghz(*ghz, signal);  // validates the pulses once
    return [ghz = *ghz, signal](double w) { return qfi(evolve_ghz(ghz, signal.with_omega(w))); };
  }
  const auto& control = std::get<ContinuousControl>(protocol);
  require_valid(control);
  return [control, signal, options](double w) {
    return qfi(evolve_continuous(control, signal.with_omega(w), options));
  };
}

FdQfi qfi_fd_oracle(const Protocol& protocol, const SignalParams& signal,
                    const FdOptions& options) {
  const double h = options.step > 0.0 ? options.step : 1e-6 * std::max(1.0, std::abs(signal.B));
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");

  auto psi_at = [&](double field) {
    return final_state_for_fd(protocol, signal.with_field(field), options);
  };
  const Vec2 psi = psi_at(signal.B);
  const Vec2 d_full = (psi_at(signal.B + h) - psi_at(signal.B - h)) / (2.0 * h);
  const Vec2 d_half = (psi_at(signal.B + 0.5 * h) - psi_at(signal.B - 0.5 * h)) / h;
  const Vec2 d_rich = (4.0 * d_half - d_full) / 3.0;

  FdQfi out;
  out.qfi = qfi(psi, d_rich);
  out.qfi_central = qfi(psi, d_full);
  const double scale = std::max(out.qfi, 1e-12 * 4.0 * d_rich.squaredNorm());
  out.disagreement = scale > 0.0 ? std::abs(out.qfi - out.qfi_central) / scale : 0.0;
  out.step_too_large = out.disagreement > options.richardson_tolerance;
  return out;
}

}  // namespace iqfi
