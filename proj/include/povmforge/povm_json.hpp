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

#pragma once

// JSON schemas for operators, POVMs and ensembles.
//
//   matrix   : row-major list of [re, im] pairs, length dim * dim
//   POVM     : {"dim": d, "effects": [matrix, ...]}
//   ensemble : {"items": [{"prob": q, "state": matrix}, ...]}

#include <string>
#include <vector>

#include "json.hpp"

#include "povmforge/povm.hpp"

namespace povmforge {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
Json matrix_to_json(const HermitianOperator& a);
/// Parses a square matrix; `path` names the field in error messages.
ComplexMatrix matrix_from_json(const Json& j, const std::string& path);

Json povm_to_json(const Povm& m);
Json ensemble_to_json(const Ensemble& e);

/// Unvalidated file contents, used to report every violation at once.
struct RawPovm {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> effects;
};
struct RawEnsemble {
  std::vector<double> probs;
  std::vector<ComplexMatrix> states;
};

RawPovm raw_povm_from_json(const Json& j);
RawEnsemble raw_ensemble_from_json(const Json& j);

Povm povm_from_json(const Json& j, PovmTolerance tol = {});
Ensemble ensemble_from_json(const Json& j, EnsembleTolerance tol = {});

}  // namespace povmforge
