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

#include "iqfi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

#include "iqfi/errors.hpp"

namespace iqfi {

namespace {

// Gauss-Kronrod 7/15 abscissae (descending) and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Sample k of a panel, in increasing position.
inline int abscissa_index(int k) { return k <= 7 ? k : 14 - k; }

inline double node(double a, double b, int k) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double x = kXgk[static_cast<std::size_t>(abscissa_index(k))];
  return k < 7 ? c - h * x : c + h * x;
}

inline double kronrod_weight(int k) { return kWgk[static_cast<std::size_t>(abscissa_index(k))]; }

inline double gauss_weight(int k) {
  const int j = abscissa_index(k);
  return (j % 2 == 1) ? kWg[static_cast<std::size_t>((j - 1) / 2)] : 0.0;
}

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  Panel p;
  p.a = a;
  p.b = b;
  const double h = 0.5 * (b - a);
  double kron = 0.0;
  double gauss = 0.0;
  double moment = 0.0;
  for (int k = 0; k < 15; ++k) {
    const double w = node(a, b, k);
    const double v = f(w);
    p.samples[static_cast<std::size_t>(k)] = v;
    kron += kronrod_weight(k) * v;
    gauss += gauss_weight(k) * v;
    moment += kronrod_weight(k) * w * w * v;
  }
  p.value = kron * h;
  p.error = std::abs(kron - gauss) * h;
  p.moment = moment * h;
  return p;
}

struct Budget {
  double rel_tol;
  double abs_tol;
  [[nodiscard]] double operator()(double value) const {
    return std::max(abs_tol, rel_tol * std::abs(value));
  }
};

class PanelSet {
 public:
  PanelSet(const std::function<double(double)>& f, const QuadratureConfig& cfg)
      : f_(f), cfg_(cfg) {}

  void add_grid(double lo, double width, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      const double a = lo + static_cast<double>(k) * width;
      const double b = lo + static_cast<double>(k + 1) * width;
      push(evaluate_panel(f_, a, b));
    }
  }

  // Bisect the worst panels until the summed error fits the budget.
  void refine(double budget_fraction, double extra_value) {
    const Budget budget{cfg_.rel_tol, cfg_.abs_tol};
    while (error_ > budget_fraction * budget(value_ + extra_value)) {
      if (panels_.size() >= cfg_.max_panels) throw_exhausted("during refinement");
      const auto [err, idx] = heap_.top();
      heap_.pop();
      const Panel old = panels_[idx];
      const double mid = 0.5 * (old.a + old.b);
      if (!(mid > old.a && mid < old.b)) {
        // panel cannot be split further; accept its error
        error_ -= old.error;
        floor_error_ += old.error;
        continue;
      }
      Panel left = evaluate_panel(f_, old.a, mid);
      Panel right = evaluate_panel(f_, mid, old.b);
      value_ += left.value + right.value - old.value;
      error_ += left.error + right.error - old.error;
      panels_[idx] = left;
      heap_.emplace(left.error, idx);
      push(std::move(right));
    }
  }

  [[nodiscard]] std::size_t size() const { return panels_.size(); }
  [[nodiscard]] std::size_t evaluations() const { return evaluations_; }

  // Sorted panels with value and error re-summed in a fixed order.
  QuadratureResult finish() const {
    QuadratureResult r;
    r.rule.panels = panels_;
    std::sort(r.rule.panels.begin(), r.rule.panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    std::vector<double> values;
    std::vector<double> errors;
    values.reserve(r.rule.panels.size());
    errors.reserve(r.rule.panels.size());
    for (const auto& p : r.rule.panels) {
      values.push_back(p.value);
      errors.push_back(p.error);
    }
    r.integral = pairwise_sum(values);
    r.quadrature_error = pairwise_sum(errors);
    r.error_estimate = r.quadrature_error;
    r.evaluations = 15 * evaluations_;
    return r;
  }

  [[noreturn]] void throw_exhausted(const std::string& where) const {
    QuadratureResult partial = finish();
    throw IntegrationError("quadrature did not converge within " +
                               std::to_string(cfg_.max_panels) + " panels (" + where + ")",
                           std::move(partial));
  }

 private:
  void push(Panel p) {
    value_ += p.value;
    error_ += p.error;
    heap_.emplace(p.error, panels_.size());
    panels_.push_back(std::move(p));
    ++evaluations_;
  }

  const std::function<double(double)>& f_;
  const QuadratureConfig& cfg_;
  std::vector<Panel> panels_;
  std::priority_queue<std::pair<double, std::size_t>> heap_;
  double value_ = 0.0;
  double error_ = 0.0;
  double floor_error_ = 0.0;
  std::size_t evaluations_ = 0;
};

struct TailFit {
  double coefficient = 0.0;
  double dispersion = 0.0;
  double amplitude = 0.0;  // max |w^2 f - C| over the decade
};

TailFit fit_tail(const std::vector<Panel>& sorted, double start, double mid, double cutoff) {
  double first = 0.0;
  double second = 0.0;
  for (const auto& p : sorted) {
    if (p.a < start) continue;
    (p.a < mid ? first : second) += p.moment;
  }
  TailFit fit;
  fit.coefficient = (first + second) / (cutoff - start);
  fit.dispersion = std::abs(first / (mid - start) - second / (cutoff - mid));
  for (const auto& p : sorted) {
    if (p.a < start) continue;
    for (int k = 0; k < 15; ++k) {
      const double w = node(p.a, p.b, k);
      fit.amplitude = std::max(
          fit.amplitude, std::abs(w * w * p.samples[static_cast<std::size_t>(k)] - fit.coefficient));
    }
  }
  return fit;
}

}  // namespace

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
    throw ValidationError("quadrature tolerances must be positive");
  }
  if (cfg.max_panels < 1) throw ValidationError("max_panels must be >= 1");
  if (!(cfg.panel_width_factor > 0.0) || !(cfg.tail_start_factor > 0.0)) {
    throw ValidationError("panel width and tail start factors must be positive");
  }
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void QuadratureResult::samples(std::vector<double>& omegas, std::vector<double>& values) const {
  omegas.clear();
  values.clear();
  omegas.reserve(rule.panels.size() * 15);
  values.reserve(rule.panels.size() * 15);
  for (const auto& p : rule.panels) {
    for (int k = 0; k < 15; ++k) {
      omegas.push_back(node(p.a, p.b, k));
      values.push_back(p.samples[static_cast<std::size_t>(k)]);
    }
  }
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double time_scale, double feature_rate,
                                         const QuadratureConfig& cfg) {
  validate(cfg);
  if (!(time_scale > 0.0) || !(feature_rate > 0.0)) {
    throw ValidationError("time scale and feature rate must be positive");
  }
  const double width = cfg.panel_width_factor * std::numbers::pi / time_scale;
  // at least 20 panels so the last decade holds two halves of several panels
  auto count = static_cast<std::size_t>(
      std::max(20.0, std::ceil(cfg.tail_start_factor * feature_rate / width)));
  if (count > cfg.max_panels) {
    throw IntegrationError("initial panel layout exceeds max_panels (" + std::to_string(count) +
                               ")",
                           QuadratureResult{});
  }

  PanelSet set(f, cfg);
  set.add_grid(0.0, width, count);
  std::size_t grid = count;
  const Budget budget{cfg.rel_tol, cfg.abs_tol};

  while (true) {
    set.refine(0.5, 0.0);
    QuadratureResult r = set.finish();
    const double cutoff = static_cast<double>(grid) * width;
    const double start = std::ceil(0.1 * static_cast<double>(grid)) * width;
    const double mid =
        std::ceil(0.5 * (start + cutoff) / width) * width;
    const TailFit fit = fit_tail(r.rule.panels, start, mid, cutoff);

    r.rule.cutoff = cutoff;
    r.rule.decade_start = start;
    r.rule.decade_mid = mid;
    r.tail_coefficient = fit.coefficient;
    r.tail = fit.coefficient / cutoff;
    // zero-mean ripple of w^2 f beyond the cutoff contributes at most about
    // one oscillation period's worth of amplitude / w^2
    r.tail_error = fit.dispersion / cutoff + 2.0 * width * fit.amplitude / (cutoff * cutoff);
    r.integral += r.tail;
    r.error_estimate = r.quadrature_error + r.tail_error;

    if (r.tail_error <= 0.5 * budget(r.integral)) {
      if (!cfg.keep_samples) {
        for (auto& p : r.rule.panels) p.samples = {};
      }
      return r;
    }
    if (set.size() + grid > cfg.max_panels) set.throw_exhausted("tail extension");
    set.add_grid(cutoff, width, grid);
    grid *= 2;
  }
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo,
                                    double hi, double time_scale, const QuadratureConfig& cfg) {
  validate(cfg);
  if (!(hi >= lo) || !(time_scale > 0.0)) throw ValidationError("invalid integration interval");
  if (hi == lo) return QuadratureResult{};
  const double width = cfg.panel_width_factor * std::numbers::pi / time_scale;
  const auto count =
      static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / width)));
  if (count > cfg.max_panels) {
    throw IntegrationError("interval needs more than max_panels panels", QuadratureResult{});
  }
  PanelSet set(f, cfg);
  set.add_grid(lo, (hi - lo) / static_cast<double>(count), count);
  set.refine(1.0, 0.0);
  QuadratureResult r = set.finish();
  if (!cfg.keep_samples) {
    for (auto& p : r.rule.panels) p.samples = {};
  }
  return r;
}

std::vector<double> integrate_on_rule(const QuadratureRule& rule, std::size_t dim,
                                      const std::function<void(double, std::span<double>)>& f) {
  std::vector<double> integral(dim, 0.0);
  std::vector<double> moment(dim, 0.0);
  std::vector<double> buffer(dim, 0.0);
  for (const auto& p : rule.panels) {
    const double h = 0.5 * (p.b - p.a);
    const bool in_decade = rule.cutoff > 0.0 && p.a >= rule.decade_start;
    for (int k = 0; k < 15; ++k) {
      const double w = node(p.a, p.b, k);
      f(w, buffer);
      const double weight = kronrod_weight(k) * h;
      for (std::size_t d = 0; d < dim; ++d) {
        integral[d] += weight * buffer[d];
        if (in_decade) moment[d] += weight * w * w * buffer[d];
      }
    }
  }
  if (rule.cutoff > 0.0) {
    const double span = rule.cutoff - rule.decade_start;
    for (std::size_t d = 0; d < dim; ++d) integral[d] += moment[d] / span / rule.cutoff;
  }
  return integral;
}

}  // namespace iqfi
