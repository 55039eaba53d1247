// Copyright 2026 The povm-forge Authors
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

#include "povmforge/povm_json.hpp"

#include <cmath>

#include "povmforge/errors.hpp"

namespace povmforge {

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return out;
}

Json matrix_to_json(const HermitianOperator& a) { return matrix_to_json(a.matrix()); }

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected a list of [re, im] pairs");
  const std::size_t count = j.size();
  const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
  if (dim == 0 || dim * dim != count) {
    throw ParseError(path + ": " + std::to_string(count) + " entries is not a square matrix");
  }
  if (dim > kDefaultDimCap) throw ParseError(path + ": dimension exceeds cap");
  ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < count; ++k) {
    const Json& pair = j[k];
    const std::string where = path + "[" + std::to_string(k) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ParseError(where + ": expected [re, im] pair of numbers");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(where + ": non-finite entry");
    m(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) = Complex(re, im);
  }
  return m;
}

Json povm_to_json(const Povm& m) {
  Json effects = Json::array();
  for (const auto& e : m.effects()) effects.push_back(matrix_to_json(e));
  return Json{{"dim", m.dim()}, {"effects", std::move(effects)}};
}

Json ensemble_to_json(const Ensemble& e) {
  Json items = Json::array();
  for (const auto& item : e.items()) {
    items.push_back(Json{{"prob", item.prob}, {"state", matrix_to_json(item.state)}});
  }
  return Json{{"items", std::move(items)}};
}

RawPovm raw_povm_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("POVM: top level must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned()) {
    throw ParseError("dim: missing or not a positive integer");
  }
  if (!j.contains("effects") || !j["effects"].is_array()) throw ParseError("effects: missing or not a list");
  RawPovm raw;
  raw.dim = j["dim"].get<std::size_t>();
  const Json& effects = j["effects"];
  if (effects.empty()) throw ParseError("effects: list is empty");
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const std::string path = "effects[" + std::to_string(i) + "]";
    raw.effects.push_back(matrix_from_json(effects[i], path));
    if (static_cast<std::size_t>(raw.effects.back().rows()) != raw.dim) {
      throw ParseError(path + ": dimension " + std::to_string(raw.effects.back().rows()) +
                       " does not match dim " + std::to_string(raw.dim));
    }
  }
  return raw;
}

RawEnsemble raw_ensemble_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("ensemble: top level must be an object");
  if (!j.contains("items") || !j["items"].is_array()) throw ParseError("items: missing or not a list");
  RawEnsemble raw;
  const Json& items = j["items"];
  if (items.empty()) throw ParseError("items: list is empty");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string path = "items[" + std::to_string(i) + "]";
    const Json& item = items[i];
    if (!item.is_object() || !item.contains("prob") || !item["prob"].is_number()) {
      throw ParseError(path + ".prob: missing or not a number");
    }
    if (!item.contains("state")) throw ParseError(path + ".state: missing");
    raw.probs.push_back(item["prob"].get<double>());
    raw.states.push_back(matrix_from_json(item["state"], path + ".state"));
    if (raw.states.back().rows() != raw.states.front().rows()) {
      throw ParseError(path + ".state: dimension differs from items[0]");
    }
  }
  return raw;
}

Povm povm_from_json(const Json& j, PovmTolerance tol) {
  RawPovm raw = raw_povm_from_json(j);
  std::vector<HermitianOperator> effects;
  effects.reserve(raw.effects.size());
  for (const auto& m : raw.effects) effects.emplace_back(m);
  return validate_povm(std::move(effects), tol);
}

Ensemble ensemble_from_json(const Json& j, EnsembleTolerance tol) {
  RawEnsemble raw = raw_ensemble_from_json(j);
  std::vector<EnsembleItem> items;
  for (std::size_t i = 0; i < raw.probs.size(); ++i) {
    items.push_back({raw.probs[i], HermitianOperator(raw.states[i])});
  }
  return validate_ensemble(std::move(items), tol);
}

}  // namespace povmforge
