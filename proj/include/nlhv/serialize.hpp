// Copyright 2026 The nlhvlab Authors
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

#ifndef NLHV_SERIALIZE_HPP
#define NLHV_SERIALIZE_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "nlhv/inequality.hpp"
#include "nlhv/models.hpp"
#include "nlhv/stats.hpp"

namespace nlhv {

// Declarative model description, the JSON form used by the command-line
// tools:
//   {"model": "qm"}
//   {"model": "nlhv", "source": "singular-uniform", "coupling": "independent"}
//   {"model": "nlhv", "source": "singular-fixed-axis", "axis": [0, 0, 1],
//    "coupling": "anti-comonotone", "seed": 7}
struct ModelSpec {
  std::string model;
  std::string source;
  std::string coupling;
  std::optional<std::array<double, 3>> axis;
  std::optional<std::uint64_t> seed;
};

ModelSpec parse_model_spec(const nlohmann::json& j);
ModelSpec parse_model_spec_text(const std::string& text);

// Short names accepted on the command line: "qm" for the singlet, or a
// coupling name which implies the uniform singular source.
ModelSpec model_spec_from_shorthand(const std::string& name);

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const CountData& counts);
nlohmann::json to_json(const CorrelationEstimate& est);
nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const ChainStep& step);
nlohmann::json to_json(const ChainRecord& record);

std::unique_ptr<MeasurementModel> build_model(const ModelSpec& spec);

}  // namespace nlhv

#endif  // NLHV_SERIALIZE_HPP
