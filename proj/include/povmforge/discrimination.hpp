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

// Minimal-error state discrimination: success probabilities, optimal
// measurements with or without a free-set restriction, and the pretty good
// measurement.

#include <optional>

#include "povmforge/freesets.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/sdp.hpp"

namespace povmforge {

struct DiscriminationResult {
  /// Success probability attained by `optimizer` (or the best generator).
  double value = 0.0;
  std::optional<Povm> optimizer;
  /// Empty when the optimization ran over all measurements.
  std::optional<FreeSetSpec> restricted_to;
  Exactness exactness = Exactness::Exact;
  /// Present when an SDP was solved.
  std::optional<sdp::SolveSummary> diagnostics;
};

/// Sum_i q_i tr(M_i rho_i). The ensemble and the POVM must have the same
/// number of elements and the same dimension.
double psucc(const Ensemble& e, const Povm& m);

/// Best success probability over all |E|-outcome measurements.
DiscriminationResult optimal_psucc(const Ensemble& e, const sdp::Options& opts = {});

/// Best success probability over measurements in `f`. For PPT sets outside
/// 2x2 and 2x3 the value is an upper bound on the separable value.
DiscriminationResult max_psucc_over_free(const Ensemble& e, const FreeSetSpec& f, const sdp::Options& opts = {});

/// M_i = q_i A^{-1/2} rho_i A^{-1/2} with A the average state; the projector
/// onto the kernel of A is added to the last effect.
Povm pretty_good_measurement(const Ensemble& e);

/// True iff the probabilities are all 1/n and every state has diagonal
/// (1/d, ..., 1/d) in the computational basis, within tol.
bool classical_indistinguishability_check(const Ensemble& e, double tol = 1e-9);

}  // namespace povmforge
