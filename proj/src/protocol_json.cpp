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

#include "iqfi/protocol_json.hpp"

#include "iqfi/errors.hpp"

namespace iqfi {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat2& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (int c = 0; c < 2; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat2 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("matrix must be 2x2");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != 2) throw ValidationError("matrix must be 2x2");
    for (int c = 0; c < 2; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2) throw ValidationError("matrix entries are [re, im]");
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

json to_json(const PulseSequence& seq) {
  json pulses = json::array();
  for (const auto& p : seq.pulses) {
    json jp;
    jp["t"] = p.time;
    if (const auto& aa = p.rotation.axis_angle()) {
      jp["axis"] = {aa->axis[0], aa->axis[1], aa->axis[2]};
      jp["angle"] = aa->angle;
    } else {
      jp["matrix"] = matrix_to_json(p.rotation.matrix());
    }
    pulses.push_back(std::move(jp));
  }
  return json{{"type", seq.type},
              {"T", seq.total_time},
              {"pulses", std::move(pulses)},
              {"initial_state",
               {{"alpha", seq.initial_state.alpha}, {"beta", seq.initial_state.beta}}}};
}

PulseSequence sequence_from_json(const json& j) {
  PulseSequence seq;
  try {
    seq.type = j.value("type", std::string("custom"));
    seq.total_time = j.at("T").get<double>();
    if (j.contains("initial_state")) {
      const auto& s = j.at("initial_state");
      seq.initial_state.alpha = s.at("alpha").get<double>();
      seq.initial_state.beta = s.at("beta").get<double>();
    }
    for (const auto& jp : j.value("pulses", json::array())) {
      Pulse p;
      p.time = jp.at("t").get<double>();
      if (jp.contains("matrix")) {
        p.rotation = Rotation::from_matrix(matrix_from_json(jp.at("matrix")));
      } else {
        const auto& a = jp.at("axis");
        if (!a.is_array() || a.size() != 3) throw ValidationError("axis must have 3 components");
        p.rotation = Rotation::about({a.at(0).get<double>(), a.at(1).get<double>(),
                                      a.at(2).get<double>()},
                                     jp.at("angle").get<double>());
      }
      seq.pulses.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed protocol JSON: ") + e.what());
  }
  require_valid(seq);
  return seq;
}

std::string dump_sequence(const PulseSequence& seq, int indent) {
  return to_json(seq).dump(indent);
}

PulseSequence parse_sequence(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("protocol JSON parse error: ") + e.what());
  }
  return sequence_from_json(j);
}

}  // namespace iqfi
