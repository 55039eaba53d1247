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

// Small helpers shared by the unit tests.

#include <random>

#include "povmforge/hermlin.hpp"
#include "povmforge/random.hpp"

namespace povmforge::testing {

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = Complex(n(rng), n(rng));
  }
  return g;
}

inline HermitianOperator random_hermitian(std::size_t dim, Rng& rng) {
  ComplexMatrix g = ginibre(dim, dim, rng);
  return HermitianOperator(g + g.adjoint());
}

}  // namespace povmforge::testing
