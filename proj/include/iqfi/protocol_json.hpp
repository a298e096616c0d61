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

#include <string>

#include "json.hpp"

#include "iqfi/protocol.hpp"

namespace iqfi {

// Wire format:
//   {"type": str, "T": num,
//    "pulses": [{"t": num, "axis": [x, y, z], "angle": num}
//             | {"t": num, "matrix": [[[re, im], [re, im]], [[re, im], [re, im]]]}],
//    "initial_state": {"alpha": num, "beta": num}}
// Doubles are written with round-trip precision.

nlohmann::json to_json(const PulseSequence& seq);

/// Throws ValidationError on missing fields or a sequence that fails validate().
PulseSequence sequence_from_json(const nlohmann::json& j);

std::string dump_sequence(const PulseSequence& seq, int indent = 2);
PulseSequence parse_sequence(const std::string& text);

}  // namespace iqfi
