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
#include <complex>

#include <Eigen/Dense>

namespace iqfi {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline const Mat2& pauli_x() {
  static const Mat2 m = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();
  return m;
}

inline const Mat2& pauli_y() {
  static const Mat2 m = (Mat2() << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0).finished();
  return m;
}

inline const Mat2& pauli_z() {
  static const Mat2 m = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
  return m;
}

/// exp(-i angle/2 n.sigma) for a unit vector n.
Mat2 rotation(const std::array<double, 3>& axis, double angle);

/// exp(-i H t) for Hermitian H (closed form via the Pauli decomposition).
Mat2 expm_hermitian(const Mat2& hamiltonian, double t);

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const Mat2& u);

/// Frobenius norm of H - H^dagger.
double hermiticity_defect(const Mat2& h);

/// cos(alpha/2)|0> + e^{i beta} sin(alpha/2)|1>.
Vec2 bloch_state(double alpha, double beta);

}  // namespace iqfi
