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

#include "nlhv/serialize.hpp"

#include <stdexcept>

namespace nlhv {

using nlohmann::json;

ModelSpec parse_model_spec(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("model spec must be a JSON object");
  ModelSpec spec;
  if (!j.contains("model") || !j.at("model").is_string()) {
    throw std::invalid_argument("model spec needs a \"model\" string");
  }
  spec.model = j.at("model").get<std::string>();
  if (spec.model == "qm") {
    // nothing else required
  } else if (spec.model == "nlhv") {
    if (!j.contains("source") || !j.contains("coupling")) {
      throw std::invalid_argument("nlhv model spec needs \"source\" and \"coupling\"");
    }
    spec.source = j.at("source").get<std::string>();
    spec.coupling = j.at("coupling").get<std::string>();
  } else {
    throw std::invalid_argument("unknown model \"" + spec.model + "\"");
  }
  if (j.contains("axis")) {
    const auto& ax = j.at("axis");
    if (!ax.is_array() || ax.size() != 3) {
      throw std::invalid_argument("\"axis\" must be a 3-vector");
    }
    spec.axis = {ax[0].get<double>(), ax[1].get<double>(), ax[2].get<double>()};
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  // Validate eagerly so bad specs fail at parse time.
  build_model(spec);
  return spec;
}

ModelSpec parse_model_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model spec is not valid JSON: ") + e.what());
  }
  return parse_model_spec(j);
}

ModelSpec model_spec_from_shorthand(const std::string& name) {
  ModelSpec spec;
  if (name == "qm") {
    spec.model = "qm";
    return spec;
  }
  if (name == "anti-comonotone" || name == "comonotone" || name == "independent") {
    spec.model = "nlhv";
    spec.source = "singular-uniform";
    spec.coupling = name;
    return spec;
  }
  throw std::invalid_argument("unknown model shorthand \"" + name + "\"");
}

json to_json(const ModelSpec& spec) {
  json j;
  j["model"] = spec.model;
  if (spec.model == "nlhv") {
    j["source"] = spec.source;
    j["coupling"] = spec.coupling;
  }
  if (spec.axis) j["axis"] = *spec.axis;
  if (spec.seed) j["seed"] = *spec.seed;
  return j;
}

json to_json(const CountData& counts) {
  return json{{"n_same", counts.n_same}, {"n_diff", counts.n_diff}, {"n", counts.n()}};
}

json to_json(const CorrelationEstimate& est) {
  return json{{"value", est.value},
              {"stderr", est.std_error},
              {"n", est.n},
              {"sample_mean", est.sample_mean}};
}

json to_json(const InequalityReport& r) {
  return json{{"alpha", r.alpha},
              {"e_xy_alpha", r.e_xy_alpha},
              {"e_xy_0", r.e_xy_0},
              {"e_xz_alpha", r.e_xz_alpha},
              {"e_xz_0", r.e_xz_0},
              {"lhs", r.lhs},
              {"bound", r.bound},
              {"margin", r.margin},
              {"violated", r.violated},
              {"lhs_stderr", r.lhs_std_error},
              {"plane1", r.plane1_label},
              {"plane2", r.plane2_label}};
}

json to_json(const ChainStep& s) {
  return json{{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"sigma", s.sigma},
              {"holds", s.holds}};
}

json to_json(const ChainRecord& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return json{{"model", r.model},
              {"alpha", r.alpha},
              {"plane", r.plane_label},
              {"samples", r.samples},
              {"steps", steps},
              {"all_hold", r.all_hold},
              {"c_ab", r.c_ab},
              {"c_ab_stderr", r.c_ab_se},
              {"c_aa", r.c_aa},
              {"c_aa_stderr", r.c_aa_se},
              {"e_alpha", r.e_alpha},
              {"e_alpha_stderr", r.e_alpha_se},
              {"e_zero", r.e_zero},
              {"e_zero_stderr", r.e_zero_se},
              {"defect_aa", r.defect_aa}};
}

std::unique_ptr<MeasurementModel> build_model(const ModelSpec& spec) {
  if (spec.model == "qm") return std::make_unique<QuantumSinglet>();
  if (spec.model != "nlhv") {
    throw std::invalid_argument("unknown model \"" + spec.model + "\"");
  }

  CouplingKind coupling;
  if (spec.coupling == "anti-comonotone") {
    coupling = CouplingKind::AntiComonotone;
  } else if (spec.coupling == "comonotone") {
    coupling = CouplingKind::Comonotone;
  } else if (spec.coupling == "independent") {
    coupling = CouplingKind::Independent;
  } else {
    throw std::invalid_argument("unknown coupling \"" + spec.coupling + "\"");
  }

  if (spec.source == "singular-uniform") {
    return std::make_unique<NlhvModel>(SourceDistribution::singular_uniform(), coupling);
  }
  if (spec.source == "product-uniform") {
    return std::make_unique<NlhvModel>(SourceDistribution::product_uniform(), coupling);
  }
  if (spec.source == "singular-fixed-axis") {
    if (!spec.axis) {
      throw std::invalid_argument("singular-fixed-axis source needs an \"axis\"");
    }
    const auto& ax = *spec.axis;
    const UnitVec axis = UnitVec::normalized({ax[0], ax[1], ax[2]});
    return std::make_unique<NlhvModel>(SourceDistribution::singular_fixed_axis(axis), coupling);
  }
  throw std::invalid_argument("unknown source \"" + spec.source + "\"");
}

}  // namespace nlhv
