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

#include <stdexcept>
#include <string>

namespace iqfi {

/// Invalid parameters or a protocol that fails its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Time grid that is not non-decreasing.
class OrderingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Adaptive ODE step fell below the representable minimum.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-difference step rejected by the Richardson consistency check.
class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iqfi
