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

#include "iqfi/linalg.hpp"

#include <cmath>

namespace iqfi {

namespace {

// sin(x)/x, accurate near zero
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

Mat2 rotation(const std::array<double, 3>& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const cplx mi(0.0, -1.0);
  return c * Mat2::Identity() +
         mi * s * (axis[0] * pauli_x() + axis[1] * pauli_y() + axis[2] * pauli_z());
}

Mat2 expm_hermitian(const Mat2& h, double t) {
  // h = h0 I + hx X + hy Y + hz Z
  const double h0 = 0.5 * (h(0, 0) + h(1, 1)).real();
  const double hz = 0.5 * (h(0, 0) - h(1, 1)).real();
  const double hx = 0.5 * (h(0, 1) + h(1, 0)).real();
  const double hy = 0.5 * (h(1, 0) - h(0, 1)).imag();
  const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
  const double x = r * t;
  const cplx mi(0.0, -1.0);
  // sin(r t)/r written as t * sinc(r t)
  const double s_over_r = t * sinc(x);
  Mat2 u = std::cos(x) * Mat2::Identity() +
           mi * s_over_r * (hx * pauli_x() + hy * pauli_y() + hz * pauli_z());
  return std::exp(mi * h0 * t) * u;
}

double unitarity_defect(const Mat2& u) {
  return (u.adjoint() * u - Mat2::Identity()).norm();
}

double hermiticity_defect(const Mat2& h) { return (h - h.adjoint()).norm(); }

Vec2 bloch_state(double alpha, double beta) {
  return Vec2(std::cos(0.5 * alpha), std::polar(std::sin(0.5 * alpha), beta));
}

}  // namespace iqfi
