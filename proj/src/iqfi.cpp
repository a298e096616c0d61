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

#include "iqfi/iqfi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "iqfi/errors.hpp"
#include "iqfi/parallel.hpp"

namespace iqfi {

namespace {

constexpr double kPi = std::numbers::pi;

double sequence_rate(const PulseSequence& seq, double coupling) {
  const double T = seq.total_time;
  const double shortest = std::max(seq.min_segment(), T / 1024.0);
  return std::max({1.0 / T, coupling, 2.0 * kPi / shortest});
}

QfiSpectrum to_spectrum(const QuadratureResult& r) {
  QfiSpectrum s;
  r.samples(s.omegas, s.values);
  s.integral = r.integral;
  s.error_estimate = r.error_estimate;
  s.tail_coefficient = r.tail_coefficient;
  s.tail = r.tail;
  s.cutoff = r.rule.cutoff;
  s.evaluations = r.evaluations;
  return s;
}

// sin(w t) / w, continuous at w = 0
double sin_over(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < 1e-4) return t * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double feature_rate(const Protocol& protocol, const SignalParams& signal) {
  const double field = signal.zeta * std::abs(signal.B);
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PulseSequence>) {
          return sequence_rate(p, field);
        } else if constexpr (std::is_same_v<P, GhzProtocol>) {
          return sequence_rate(p.sequence, static_cast<double>(p.n) * field);
        } else {
          return std::max({1.0 / p.total_time, 2.0 * kPi / p.min_piece(),
                           p.max_generator_norm(), field});
        }
      },
      protocol);
}

QfiSpectrum integrate_iqfi(const Protocol& protocol, const SignalParams& signal,
                           const QuadratureConfig& cfg, const OdeOptions& ode) {
  validate(cfg);
  const auto J = qfi_spectrum_function(protocol, signal, ode);
  return to_spectrum(
      integrate_semi_infinite(J, total_time(protocol), feature_rate(protocol, signal), cfg));
}

QfiSpectrum integrate_band(const Protocol& protocol, const SignalParams& signal, double lo,
                           double hi, const QuadratureConfig& cfg, const OdeOptions& ode) {
  validate(cfg);
  if (!(lo >= 0.0)) throw ValidationError("band must start at a nonnegative frequency");
  const auto J = qfi_spectrum_function(protocol, signal, ode);
  return to_spectrum(integrate_interval(J, lo, hi, total_time(protocol), cfg));
}

QfiSpectrum sample_spectrum(const Protocol& protocol, const SignalParams& signal, double lo,
                            double hi, std::size_t points, std::size_t jobs,
                            const OdeOptions& ode) {
  if (points == 0) throw ValidationError("spectrum needs at least one point");
  if (!(lo >= 0.0) || (points > 1 && !(hi > lo))) {
    throw ValidationError("spectrum range must satisfy 0 <= omega-min < omega-max");
  }
  const auto J = qfi_spectrum_function(protocol, signal, ode);
  QfiSpectrum s;
  s.omegas.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    s.omegas[i] = points == 1 ? lo
                              : lo + (hi - lo) * static_cast<double>(i) /
                                         static_cast<double>(points - 1);
  }
  s.values = parallel_map(points, jobs, [&](std::size_t i) { return J(s.omegas[i]); });
  s.evaluations = points;
  return s;
}

double cross_spectral_integral(double t1, double t0) {
  if (!(t1 >= 0.0) || !(t0 >= 0.0)) throw ValidationError("times must be nonnegative");
  return 0.5 * kPi * std::min(t1, t0);
}

QuadratureResult cross_spectral_numeric(double t1, double t0, const QuadratureConfig& cfg) {
  if (!(t1 >= 0.0) || !(t0 >= 0.0)) throw ValidationError("times must be nonnegative");
  const double shorter = std::min(t1, t0);
  if (shorter == 0.0) return QuadratureResult{};
  const double longer = std::max(t1, t0);
  // the tail term (1/2) cos(w (t1 - t0)) / w^2 must be resolved relative to min(t1, t0)
  const double rate = 10.0 / shorter;
  return integrate_semi_infinite(
      [=](double w) { return sin_over(w, t1) * sin_over(w, t0); }, longer, rate, cfg);
}

HaarResult haar_average_iqfi(const PulseSequence& seq, const SignalParams& signal,
                             const QuadratureConfig& cfg, const HaarOptions& options) {
  require_valid(seq);
  validate(cfg);
  HaarResult out;
  if (seq.is_z_preserving()) {
    PulseSequence equator = seq;
    equator.initial_state = InitialState{};
    out.value = integrate_iqfi(equator, signal, cfg).integral * (2.0 / 3.0);
    out.method = "analytic-alpha";
    return out;
  }

  if (options.samples < 2) throw ValidationError("Monte Carlo needs at least two samples");
  const std::size_t S = options.samples;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<Vec2> states(S);
  for (auto& psi : states) {
    for (int k = 0; k < 2; ++k) psi(k) = cplx(normal(rng), normal(rng));
    psi.normalize();
  }

  const auto at = [&](double w) {
    SignalParams s = signal;
    s.omega = w;
    return propagate(seq, s);
  };
  const auto mean_J = [&](double w) {
    const Propagator p = at(w);
    double sum = 0.0;
    for (const auto& psi : states) sum += qfi(p.U * psi, p.dU * psi);
    return sum / static_cast<double>(S);
  };
  const QuadratureResult driver = integrate_semi_infinite(
      mean_J, seq.total_time, feature_rate(seq, signal), cfg);
  const std::vector<double> per_sample =
      integrate_on_rule(driver.rule, S, [&](double w, std::span<double> out_values) {
        const Propagator p = at(w);
        for (std::size_t i = 0; i < S; ++i) {
          out_values[i] = qfi(p.U * states[i], p.dU * states[i]);
        }
      });

  const double mean = pairwise_sum(per_sample) / static_cast<double>(S);
  std::vector<double> sq(S);
  for (std::size_t i = 0; i < S; ++i) sq[i] = (per_sample[i] - mean) * (per_sample[i] - mean);
  const double variance = pairwise_sum(sq) / static_cast<double>(S - 1);
  out.value = mean;
  out.std_error = std::sqrt(variance / static_cast<double>(S));
  out.method = "monte-carlo";
  out.samples = S;
  out.converged = out.std_error <= options.max_relative_std_error * std::abs(mean);
  return out;
}

std::vector<SweepPoint> sweep_iqfi_vs_T(const ProtocolFamily& family,
                                        const std::vector<double>& Ts,
                                        const SignalParams& signal,
                                        const QuadratureConfig& cfg, std::size_t jobs,
                                        const OdeOptions& ode) {
  validate(cfg);
  for (std::size_t i = 1; i < Ts.size(); ++i) {
    if (!(Ts[i] > Ts[i - 1])) throw OrderingError("sweep times must be strictly increasing");
  }
  return parallel_map(Ts.size(), jobs, [&](std::size_t i) {
    SweepPoint p;
    p.T = Ts[i];
    try {
      const QfiSpectrum s = integrate_iqfi(family(Ts[i]), signal, cfg, ode);
      p.K = s.integral;
      p.K_err = s.error_estimate;
      p.ok = true;
    } catch (const std::exception& e) {
      p.K = std::nan("");
      p.K_err = std::nan("");
      p.message = e.what();
    }
    return p;
  });
}

double fit_loglog_slope(const std::vector<SweepPoint>& points, double t_lo, double t_hi) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (p.ok && p.K > 0.0 && p.T >= t_lo && p.T <= t_hi) {
      xs.push_back(std::log(p.T));
      ys.push_back(std::log(p.K));
    }
  }
  if (xs.size() < 2) throw ValidationError("slope window holds fewer than two points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> local_slopes(const std::vector<SweepPoint>& points) {
  std::vector<double> out(points.size(), std::nan(""));
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (a.ok && b.ok && a.K > 0.0 && b.K > 0.0) {
      out[i] = std::log(b.K / a.K) / std::log(b.T / a.T);
    }
  }
  return out;
}

std::string spectrum_csv(const QfiSpectrum& spectrum) {
  std::ostringstream os;
  os << kCsvVersionLine << "\nomega,J\n";
  for (std::size_t i = 0; i < spectrum.omegas.size(); ++i) {
    os << format_number(spectrum.omegas[i]) << ',' << format_number(spectrum.values[i]) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  const std::vector<double> slopes = local_slopes(points);
  std::ostringstream os;
  os << kCsvVersionLine << "\nT,K,K_err,slope_window\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << format_number(points[i].T) << ',' << format_number(points[i].K) << ','
       << format_number(points[i].K_err) << ',' << format_number(slopes[i]) << '\n';
  }
  return os.str();
}

}  // namespace iqfi
