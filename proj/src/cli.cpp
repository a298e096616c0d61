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

#include "iqfi/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "iqfi/bounds.hpp"
#include "iqfi/errors.hpp"
#include "iqfi/iqfi.hpp"
#include "iqfi/parallel.hpp"
#include "iqfi/protocol_json.hpp"

namespace iqfi::cli {

namespace {

using nlohmann::json;

Axis parse_axis(const std::string& name) {
  if (name == "X" || name == "x") return Axis::X;
  if (name == "Y" || name == "y") return Axis::Y;
  if (name == "Z" || name == "z") return Axis::Z;
  throw ValidationError("unknown axis '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SignalParams signal_of(const RunConfig& c) {
  SignalParams s;
  s.B = c.B;
  s.phi = c.phi;
  s.zeta = c.zeta;
  s.validate();
  return s;
}

QuadratureConfig quadrature_of(const RunConfig& c) {
  QuadratureConfig q;
  q.rel_tol = c.rel_tol;
  validate(q);
  return q;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  // Single-output commands write to --out or stdout.
  void single(const std::string& text) const {
    if (config_.out.empty()) {
      out_ << text;
    } else {
      write_atomically(config_.out, text);
    }
  }

  // Multi-file commands treat --out as a path prefix.
  void file(const std::string& fallback_prefix, const std::string& suffix,
            const std::string& text) const {
    const std::string prefix = config_.out.empty() ? fallback_prefix : config_.out;
    const std::string path = prefix + suffix;
    write_atomically(path, text);
    out_ << "wrote " << path << '\n';
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

void require_format(const RunConfig& c) {
  if (c.format != "csv" && c.format != "json") {
    throw ValidationError("unsupported format '" + c.format + "' (csv or json)");
  }
}

json spectrum_json(const QfiSpectrum& s) {
  return json{{"omega", s.omegas}, {"J", s.values}};
}

std::string render_spectrum(const RunConfig& c, const QfiSpectrum& s) {
  return c.format == "json" ? spectrum_json(s).dump(2) + "\n" : spectrum_csv(s);
}

json sweep_json(const std::vector<SweepPoint>& points) {
  json rows = json::array();
  const auto slopes = local_slopes(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    json row{{"T", p.T}, {"ok", p.ok}};
    row["K"] = p.ok ? json(p.K) : json(nullptr);
    row["K_err"] = p.ok ? json(p.K_err) : json(nullptr);
    row["slope_window"] = std::isnan(slopes[i]) ? json(nullptr) : json(slopes[i]);
    if (!p.ok) row["error"] = p.message;
    rows.push_back(std::move(row));
  }
  return rows;
}

void require_grid(const RunConfig& c) {
  if (c.omega_points < 1) throw ValidationError("--omega-points must be >= 1");
}

// ---- commands -----------------------------------------------------------------

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  require_format(c);
  require_grid(c);
  const Protocol p = build_protocol(c);
  const QfiSpectrum s = sample_spectrum(p, signal_of(c), c.omega_min, c.omega_max,
                                        static_cast<std::size_t>(c.omega_points),
                                        resolve_jobs(c.jobs));
  Emitter(c, out).single(render_spectrum(c, s));
  return kOk;
}

std::vector<BoundReport> applicable_bounds(const Protocol& p, const SignalParams& s, double K,
                                           double K_err) {
  std::vector<BoundReport> out;
  const double T = total_time(p);
  double scale = 1.0;  // effective coupling multiplier (n for GHZ probes)
  const PulseSequence* seq = std::get_if<PulseSequence>(&p);
  if (const auto* ghz = std::get_if<GhzProtocol>(&p)) {
    seq = &ghz->sequence;
    scale = static_cast<double>(ghz->n);
  }
  const double coupling = scale * s.zeta;
  if (seq != nullptr) {
    out.push_back(check_upper_bound("segment-bound", K,
                                    n_pulse_bound(seq->segment_count(), T, coupling), K_err));
  }
  if (coupling * std::abs(s.B) * T <= 0.1) {
    out.push_back(check_upper_bound("perturbative-bound", K, b0_linear_bound(T, s.B, coupling),
                                    K_err));
  }
  return out;
}

int cmd_iqfi(const RunConfig& c, std::ostream& out) {
  require_format(c);
  const Protocol p = build_protocol(c);
  const SignalParams s = signal_of(c);
  const QfiSpectrum r = integrate_iqfi(p, s, quadrature_of(c));
  const auto bounds = applicable_bounds(p, s, r.integral, r.error_estimate);
  if (c.format == "json") {
    const json report{{"protocol", c.protocol},
                      {"T", total_time(p)},
                      {"K", r.integral},
                      {"K_err", r.error_estimate},
                      {"tail_coefficient", r.tail_coefficient},
                      {"cutoff", r.cutoff},
                      {"evaluations", r.evaluations},
                      {"bounds", to_json(bounds)}};
    Emitter(c, out).single(report.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << kCsvVersionLine << "\nT,K,K_err,tail_coefficient\n"
       << format_number(total_time(p)) << ',' << format_number(r.integral) << ','
       << format_number(r.error_estimate) << ',' << format_number(r.tail_coefficient) << '\n';
    Emitter(c, out).single(os.str());
  }
  return kOk;
}

int cmd_fig1(const RunConfig& c, std::ostream& out) {
  require_format(c);
  if (c.slope_window.size() != 2) throw ValidationError("--slope-window takes two values");
  const std::vector<double> Ts =
      c.Ts.empty() ? std::vector<double>{2, 3, 4, 6, 8, 12, 16, 24, 32} : c.Ts;
  const std::vector<double> fields =
      c.fields.empty() ? std::vector<double>{1.0, 0.1, 0.01, 0.0} : c.fields;
  const QuadratureConfig q = quadrature_of(c);
  const Emitter emit(c, out);
  const ProtocolFamily family = [&](double T) {
    return Protocol{make_trotterized_gx(T, static_cast<std::size_t>(std::lround(2.0 * T)), c.g)};
  };

  json all = json::array();
  for (const double B : fields) {
    RunConfig at = c;
    at.B = B;
    const auto points = sweep_iqfi_vs_T(family, Ts, signal_of(at), q, resolve_jobs(c.jobs));
    double slope = std::nan("");
    try {
      slope = fit_loglog_slope(points, c.slope_window[0], c.slope_window[1]);
    } catch (const ValidationError&) {
      // too few points in the window; reported as NaN
    }
    out << "B=" << format_number(B) << " slope[" << format_number(c.slope_window[0]) << ','
        << format_number(c.slope_window[1]) << "]=" << format_number(slope) << '\n';
    for (const auto& p : points) {
      if (!p.ok) out << "  T=" << format_number(p.T) << " failed: " << p.message << '\n';
    }
    if (c.format == "csv") {
      emit.file("fig1", "_B" + short_number(B) + ".csv", sweep_csv(points));
    } else {
      all.push_back(json{{"B", B},
                         {"slope", std::isnan(slope) ? json(nullptr) : json(slope)},
                         {"slope_window", c.slope_window},
                         {"points", sweep_json(points)}});
    }
  }
  if (c.format == "json") emit.file("fig1", ".json", all.dump(2) + "\n");
  return kOk;
}

int cmd_fig2(const RunConfig& c, std::ostream& out) {
  require_format(c);
  require_grid(c);
  const std::vector<double> Ts = c.Ts.empty() ? std::vector<double>{2, 4, 6, 8} : c.Ts;
  const SignalParams s = signal_of(c);
  const Emitter emit(c, out);
  const std::size_t jobs = resolve_jobs(c.jobs);
  for (const double T : Ts) {
    std::vector<double> integer_times;
    for (int k = 1; k <= static_cast<int>(std::floor(T)); ++k) integer_times.push_back(k);
    const std::vector<std::pair<std::string, Protocol>> panel{
        {"ramsey", make_ramsey(T)},
        {"pi-train", make_pi_train(integer_times, Axis::X, T)},
        {"pi2-train", make_pi2_train(c.spacing, T)},
        {"gx", make_gx(T, c.g)}};
    for (const auto& [name, protocol] : panel) {
      const QfiSpectrum spectrum =
          sample_spectrum(protocol, s, c.omega_min, c.omega_max,
                          static_cast<std::size_t>(c.omega_points), jobs);
      emit.file("fig2", "_T" + short_number(T) + "_" + name + (c.format == "json" ? ".json" : ".csv"),
                render_spectrum(c, spectrum));
    }
  }
  return kOk;
}

int cmd_bounds_check(const RunConfig& c, std::ostream& out) {
  require_format(c);
  BatteryOptions options;
  options.seed = c.seed;
  options.quadrature = quadrature_of(c);
  options.jobs = resolve_jobs(c.jobs);
  options.T = c.T;
  options.zeta = c.zeta;
  const auto reports = run_bound_battery(options);
  std::size_t violations = 0;
  for (const auto& r : reports) violations += r.satisfied ? 0 : 1;
  if (c.format == "json") {
    Emitter(c, out).single(to_json(reports).dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << kCsvVersionLine << "\nname,measured,bound_or_reference,satisfied,margin\n";
    for (const auto& r : reports) {
      os << r.name << ',' << format_number(r.measured) << ','
         << format_number(r.bound_or_reference) << ',' << (r.satisfied ? 1 : 0) << ','
         << format_number(r.margin) << '\n';
    }
    Emitter(c, out).single(os.str());
  }
  if (!c.out.empty()) {
    out << reports.size() - violations << "/" << reports.size() << " checks satisfied\n";
  }
  return violations == 0 ? kOk : kBoundViolation;
}

int cmd_haar(const RunConfig& c, std::ostream& out) {
  require_format(c);
  const Protocol p = build_protocol(c);
  const auto* seq = std::get_if<PulseSequence>(&p);
  if (seq == nullptr) throw ValidationError("haar averaging needs a discrete pulse sequence");
  HaarOptions options;
  options.seed = c.seed;
  const HaarResult r = haar_average_iqfi(*seq, signal_of(c), quadrature_of(c), options);
  if (c.format == "json") {
    const json report{{"value", r.value},       {"std_error", r.std_error},
                      {"method", r.method},     {"samples", r.samples},
                      {"converged", r.converged}};
    Emitter(c, out).single(report.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << kCsvVersionLine << "\nvalue,std_error,method,samples,converged\n"
       << format_number(r.value) << ',' << format_number(r.std_error) << ',' << r.method << ','
       << r.samples << ',' << (r.converged ? 1 : 0) << '\n';
    Emitter(c, out).single(os.str());
  }
  return kOk;
}

}  // namespace

Protocol build_protocol(const RunConfig& c) { return build_protocol(c, c.T); }

Protocol build_protocol(const RunConfig& c, double T) {
  const InitialState state{c.alpha, c.beta};
  const auto with_state = [&](PulseSequence seq) {
    seq.initial_state = state;
    return seq;
  };
  if (c.protocol == "ramsey") return with_state(make_ramsey(T));
  if (c.protocol == "pi-train") {
    std::vector<double> times = c.times;
    if (times.empty()) {
      for (int k = 1; k <= static_cast<int>(std::floor(T)); ++k) times.push_back(k);
    }
    return with_state(make_pi_train(times, parse_axis(c.axis), T));
  }
  if (c.protocol == "pi2-train") return with_state(make_pi2_train(c.spacing, T));
  if (c.protocol == "trotter-gx") {
    const long m = c.m > 0 ? c.m : std::lround(2.0 * T);
    if (m < 1) throw ValidationError("trotter-gx needs m >= 1");
    return with_state(make_trotterized_gx(T, static_cast<std::size_t>(m), c.g));
  }
  if (c.protocol == "gx") {
    ContinuousControl control = make_gx(T, c.g);
    control.initial_state = state;
    return control;
  }
  if (c.protocol == "ghz") {
    if (c.n < 1) throw ValidationError("ghz needs n >= 1");
    return GhzProtocol{static_cast<std::size_t>(c.n), make_ramsey(T)};
  }
  if (c.protocol == "file") {
    if (c.protocol_file.empty()) throw ValidationError("--protocol file needs --protocol-file");
    return parse_sequence(read_file(c.protocol_file));
  }
  throw ValidationError("unknown protocol '" + c.protocol + "'");
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << text;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Broadband qubit sensing: QFI spectra, integrated QFI and bound checks",
               "iqfi-lab"};
  app.set_config("--config", "", "INI file of flag values; flags on the command line win");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--protocol", c.protocol,
                 "ramsey | pi-train | pi2-train | trotter-gx | gx | ghz | file")
      ->capture_default_str();
  app.add_option("--protocol-file", c.protocol_file, "JSON pulse sequence (with --protocol file)");
  app.add_option("--T", c.T, "total sensing time (s)")->capture_default_str();
  auto* field_opt = app.add_option("--B", c.B, "signal amplitude")->capture_default_str();
  app.add_option("--zeta", c.zeta, "coupling (rad/s per field unit)")->capture_default_str();
  app.add_option("--phi", c.phi, "signal phase in [0, 2pi)")->capture_default_str();
  app.add_option("--g", c.g, "transverse drive strength (rad/s)")->capture_default_str();
  app.add_option("--m", c.m, "Trotter segments (0: round(2T))")->capture_default_str();
  app.add_option("--n", c.n, "GHZ qubit count")->capture_default_str();
  app.add_option("--spacing", c.spacing, "pi/2-train pulse spacing (s)")->capture_default_str();
  app.add_option("--axis", c.axis, "pi-train axis X | Y | Z")->capture_default_str();
  app.add_option("--times", c.times, "pi-train pulse times (default 1..floor(T))")
      ->delimiter(',');
  app.add_option("--alpha", c.alpha, "initial Bloch polar angle")->capture_default_str();
  app.add_option("--beta", c.beta, "initial Bloch azimuth")->capture_default_str();
  app.add_option("--omega-min", c.omega_min, "spectrum grid start (rad/s)")->capture_default_str();
  app.add_option("--omega-max", c.omega_max, "spectrum grid end (rad/s)")->capture_default_str();
  app.add_option("--omega-points", c.omega_points, "spectrum grid size")->capture_default_str();
  app.add_option("--Ts", c.Ts, "sweep or panel durations")->delimiter(',');
  app.add_option("--fields", c.fields, "fig1 signal amplitudes")->delimiter(',');
  app.add_option("--slope-window", c.slope_window, "fig1 slope fit range in T")
      ->expected(2)
      ->delimiter(',');
  app.add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads (fallback IQFI_LAB_THREADS, then 1)");
  app.add_option("--out", c.out, "output file (prefix for fig1/fig2)");
  app.add_option("--format", c.format, "csv | json")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "J(B|omega) on a frequency grid");
  auto* iqfi_cmd = app.add_subcommand("iqfi", "integrated QFI with bound margins");
  auto* fig1 = app.add_subcommand("fig1", "K(T) sweeps of the Trotterized drive (m = 2T)");
  auto* fig2 = app.add_subcommand("fig2", "spectra of four protocols per duration");
  auto* bounds = app.add_subcommand("bounds-check", "closed forms and bounds on random protocols");
  auto* haar = app.add_subcommand("haar", "IQFI averaged over Haar-random initial states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(c, out);
    if (iqfi_cmd->parsed()) return cmd_iqfi(c, out);
    if (fig1->parsed()) return cmd_fig1(c, out);
    if (fig2->parsed()) {
      if (field_opt->count() == 0) c.B = 1.0 / c.zeta;
      return cmd_fig2(c, out);
    }
    if (bounds->parsed()) return cmd_bounds_check(c, out);
    if (haar->parsed()) return cmd_haar(c, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return kIntegrationFailure;
  } catch (const StiffnessError& e) {
    err << "integration failed: " << e.what() << '\n';
    return kIntegrationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}

}  // namespace iqfi::cli
