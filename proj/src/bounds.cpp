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

#include "iqfi/bounds.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "iqfi/errors.hpp"
#include "iqfi/iqfi.hpp"
#include "iqfi/parallel.hpp"
#include "iqfi/protocol_random.hpp"

namespace iqfi {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(x)/x and (x cos x - sin x)/x^3, both smooth at 0
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinc_slope_over_x(double x) {
  if (std::abs(x) < 1e-3) return -1.0 / 3.0 + x * x / 30.0;
  return (x * std::cos(x) - std::sin(x)) / (x * x * x);
}

double relative(double diff, double scale) { return scale != 0.0 ? diff / std::abs(scale) : diff; }

}  // namespace

double ramsey_closed_form(double T, double phi, double zeta) {
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  return 2.0 * zeta * zeta * T * (kPi - std::log(4.0) * std::sin(2.0 * phi));
}

double pi_train_closed_form(double t0, double tN, double alpha, double zeta) {
  if (!(tN >= t0)) throw ValidationError("tN must not precede t0");
  const double s = std::sin(alpha);
  return 2.0 * kPi * zeta * zeta * (tN - t0) * s * s;
}

double b0_linear_bound(double T, double B, double zeta) {
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  const double z2 = zeta * zeta;
  return 2.0 * kPi * z2 * T + 40.0 * kPi * z2 * z2 * B * B * T * T * T;
}

double n_pulse_bound(std::size_t segments, double T, double zeta) {
  if (segments < 1) throw ValidationError("segment count must be >= 1");
  return 2.0 * kPi * static_cast<double>(segments) * zeta * zeta * T;
}

GhzScaling ghz_scaling(std::size_t n, double T, double zeta) {
  if (n < 1) throw ValidationError("qubit count must be >= 1");
  const double unit = 2.0 * kPi * zeta * zeta * T;
  const auto nd = static_cast<double>(n);
  return {unit * nd * nd, unit * nd};
}

SensorState rwa_evolve(double omega, double B, double g, double T, double zeta) {
  if (!(g > 0.0)) throw ValidationError("drive strength g must be positive");
  const double field = zeta * B;
  const double detune = 2.0 * g - omega;
  const double theta = 0.5 * T * std::hypot(field, detune);
  const double half = 0.5 * T;
  // U = cos(theta) - i (T/2) sinc(theta) (detune X + field Z)
  const Mat2 h = detune * pauli_x() + field * pauli_z();
  const double s = sinc(theta);
  const cplx minus_i(0.0, -1.0);
  const Mat2 U = std::cos(theta) * Mat2::Identity() + minus_i * (half * s) * h;
  // d theta / dB = (T/2)^2 zeta^2 B / theta; derivative taken through sinc
  const double k = half * half * zeta * zeta * B;
  const Mat2 dU = -(k * s) * Mat2::Identity() +
                  minus_i * half * (k * sinc_slope_over_x(theta) * h + s * zeta * pauli_z());
  const Vec2 plus = bloch_state(0.5 * kPi, 0.0);
  SensorState out;
  out.psi = U * plus;
  out.dpsi = dU * plus;
  out.B = B;
  out.omega = omega;
  out.T = T;
  return out;
}

double rwa_qfi(double omega, double B, double g, double T, double zeta) {
  return qfi(rwa_evolve(omega, B, g, T, zeta));
}

double rwa_iqfi_lower_bound(double T, double B, double g, double zeta) {
  if (!(g > 0.0) || !(B > 0.0)) throw ValidationError("g and B must be positive");
  const double field = zeta * B;
  const double r = g / field;
  return zeta * zeta * T * T * (g / (1.0 + r * r) + field * std::atan(r));
}

BoundReport check_upper_bound(std::string name, double measured, double bound, double slack) {
  BoundReport r{std::move(name), CheckKind::UpperBound, measured, bound, slack, false, 0.0};
  r.satisfied = measured <= bound + slack;
  r.margin = relative(bound - measured, bound);
  return r;
}

BoundReport check_lower_bound(std::string name, double measured, double bound, double slack) {
  BoundReport r{std::move(name), CheckKind::LowerBound, measured, bound, slack, false, 0.0};
  r.satisfied = measured >= bound - slack;
  r.margin = relative(measured - bound, bound);
  return r;
}

BoundReport check_equality(std::string name, double measured, double reference, double rel_tol) {
  BoundReport r{std::move(name), CheckKind::Equality, measured, reference, rel_tol, false, 0.0};
  const double err = relative(std::abs(measured - reference), reference);
  r.satisfied = err <= rel_tol;
  r.margin = rel_tol - err;
  return r;
}

nlohmann::json to_json(const BoundReport& report) {
  static constexpr const char* kKinds[] = {"upper-bound", "lower-bound", "equality"};
  return nlohmann::json{{"name", report.name},
                        {"kind", kKinds[static_cast<int>(report.kind)]},
                        {"measured", report.measured},
                        {"bound_or_reference", report.bound_or_reference},
                        {"tolerance", report.tolerance},
                        {"satisfied", report.satisfied},
                        {"margin", report.margin}};
}

nlohmann::json to_json(const std::vector<BoundReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

std::vector<BoundReport> run_bound_battery(const BatteryOptions& options) {
  const double T = options.T;
  const double zeta = options.zeta;
  const QuadratureConfig& cfg = options.quadrature;
  std::vector<BoundReport> out;

  const auto K = [&](const Protocol& p, const SignalParams& s) {
    return integrate_iqfi(p, s, cfg);
  };
  SignalParams base;
  base.zeta = zeta;

  for (const auto& [label, phi] : {std::pair{"0", 0.0}, std::pair{"3pi/4", 0.75 * kPi}}) {
    SignalParams s = base;
    s.phi = phi;
    out.push_back(check_equality(std::string("ramsey-phi-") + label, K(make_ramsey(T), s).integral,
                                 ramsey_closed_form(T, phi, zeta), 0.005));
  }

  std::vector<double> integer_times;
  for (int k = 1; k <= static_cast<int>(std::floor(T)); ++k) integer_times.push_back(k);
  const PulseSequence integer_train = make_pi_train(integer_times, Axis::X, T);
  {
    SignalParams s = base;
    s.B = 0.01 / zeta;
    out.push_back(check_equality("pi-train-integer-times", K(integer_train, s).integral,
                                 pi_train_closed_form(0.0, T, 0.5 * kPi, zeta), 0.01));
    const HaarResult haar = haar_average_iqfi(integer_train, s, cfg);
    out.push_back(check_equality("haar-pi-train", haar.value,
                                 4.0 * kPi * zeta * zeta * T / 3.0, 0.01));
  }

  // randomized protocols are drawn serially so the battery is schedule-independent
  Rng rng(options.seed);
  std::uniform_int_distribution<std::size_t> up_to_32(1, 32);
  std::uniform_int_distribution<std::size_t> up_to_8(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Job {
    std::string name;
    PulseSequence seq;
    SignalParams signal;
    int kind;  // 0 pi-train equality, 1 perturbative bound, 2 segment bound
  };
  std::vector<Job> jobs;
  for (int i = 0; i < 50; ++i) {
    jobs.push_back({"pi-train-random-" + std::to_string(i), random_pi_train(rng, up_to_32(rng), T),
                    base, 0});
    jobs.back().signal.B = 0.01 / (zeta * T);
  }
  for (int i = 0; i < 30; ++i) {
    SignalParams s = base;
    s.B = 0.1 * unit(rng) / (zeta * T);
    jobs.push_back({"perturbative-bound-" + std::to_string(i), random_sequence(rng, up_to_8(rng), T),
                    s, 1});
  }
  for (int i = 0; i < 50; ++i) {
    SignalParams s = base;
    s.B = 1.0 / zeta;
    jobs.push_back({"segment-bound-" + std::to_string(i), random_sequence(rng, 8, T), s, 2});
  }

  auto reports = parallel_map(jobs.size(), options.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    const QfiSpectrum r = K(job.seq, job.signal);
    switch (job.kind) {
      case 0:
        return check_equality(job.name, r.integral, 2.0 * kPi * zeta * zeta * T, 0.01);
      case 1:
        return check_upper_bound(job.name, r.integral, b0_linear_bound(T, job.signal.B, zeta),
                                 r.error_estimate);
      default:
        return check_upper_bound(job.name, r.integral,
                                 n_pulse_bound(job.seq.segment_count(), T, zeta),
                                 r.error_estimate);
    }
  });
  for (auto& r : reports) out.push_back(std::move(r));

  for (std::size_t n = 1; n <= 4; ++n) {
    GhzProtocol ghz{n, make_ramsey(T)};
    out.push_back(check_equality("ghz-n=" + std::to_string(n), K(ghz, base).integral,
                                 ghz_scaling(n, T, zeta).entangled, 0.01));
  }

  for (int i = 0; i < 5; ++i) {
    const double t1 = 0.1 + 9.9 * unit(rng);
    const double t0 = 0.1 + 9.9 * unit(rng);
    out.push_back(check_equality("cross-spectral-" + std::to_string(i),
                                 cross_spectral_numeric(t1, t0, cfg).integral,
                                 cross_spectral_integral(t1, t0), 0.001));
  }

  {
    const double g = 0.5 * kPi;
    const double Tg = 8.0;
    SignalParams s = base;
    s.B = 1.0 / zeta;
    const QfiSpectrum band = integrate_band(make_gx(Tg, g), s, g, 3.0 * g, cfg);
    out.push_back(check_lower_bound("rwa-band-lower-bound", band.integral,
                                    rwa_iqfi_lower_bound(Tg, s.B, g, zeta), band.error_estimate));
  }
  return out;
}

}  // namespace iqfi
