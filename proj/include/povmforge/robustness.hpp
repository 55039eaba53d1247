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

// Robustness of a measurement against a free set: the least weight s such
// that (M + s N) / (1 + s) is free for some POVM N. Computed by SDP together
// with the dual witnesses and the discrimination task they define.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "povmforge/discrimination.hpp"
#include "povmforge/freesets.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/povm_json.hpp"
#include "povmforge/sdp.hpp"

namespace povmforge {

/// Ensemble built from witness operators. Components whose trace was too small
/// are left out; `outcomes[k]` is the witness index of ensemble item k.
struct ExtractedEnsemble {
  Ensemble ensemble;
  std::vector<std::size_t> outcomes;
  std::vector<std::size_t> dropped;
  /// Sum of the (shifted) witness traces.
  double total_trace = 0.0;
  std::size_t num_outcomes = 0;

  /// One item per outcome, dropped outcomes carried as zero-probability
  /// maximally mixed states, so it can be paired with an n-outcome POVM.
  Ensemble aligned() const;
};

struct RobustnessCertificate {
  /// s*, clamped at zero.
  double value = 0.0;
  Povm noise_povm;
  Povm free_povm;
  /// Z*: PSD, normalized so that sum_i tr(Z_i N_i) <= 1 for every free N.
  std::vector<HermitianOperator> dual_witness;
  /// sum_i tr(Z*_i M_i) - 1, a lower bound on the robustness.
  double dual_value = 0.0;
  double duality_gap = 0.0;
  /// Factor the raw multipliers were divided by during normalization.
  double witness_scale = 1.0;
  std::optional<ExtractedEnsemble> extracted_ensemble;
  FreeSetSpec free_set;
  Exactness exactness = Exactness::Exact;
  sdp::SolveSummary diagnostics;
};

struct RobustnessOptions {
  sdp::Options solver;
  /// Below this value the noise POVM is arbitrary and reported as uniform trivial.
  double zero_value_tol = 1e-7;
  /// Witness components with trace at most this fraction of the total are dropped.
  double drop_tol = 1e-9;
};

/// Solves min t - 1 over effects X_i with X_i - M_i PSD and X / t free. The
/// multipliers of the X_i - M_i PSD constraints give the dual witness.
RobustnessCertificate robustness_primal(const Povm& m, const FreeSetSpec& f, const RobustnessOptions& opts = {});

struct DualRobustness {
  double value = 0.0;
  std::vector<HermitianOperator> witness;
  sdp::SolveSummary diagnostics;
};

/// max sum_i tr(Z_i M_i) - 1 over PSD Z_i subject to the finite form of the
/// free-set constraint. Throws UnsupportedError for PPT sets.
DualRobustness robustness_dual(const Povm& m, const FreeSetSpec& f, const sdp::Options& opts = {});

/// max over free N of sum_i tr(Z_i N_i).
double max_free_pairing(const FreeSetSpec& f, const std::vector<HermitianOperator>& witnesses,
                        const sdp::Options& opts = {});

/// {tr Z_i / sum tr Z, Z_i / tr Z_i}. Throws RangeError if every component is
/// dropped and NotPsdError if a component is clearly not PSD.
ExtractedEnsemble extract_optimal_ensemble(const std::vector<HermitianOperator>& witnesses, double drop_tol = 1e-9);

/// Shifts every W_i by max(0, -lambda_min) I, lambda_min the smallest
/// eigenvalue over all W_i, and builds the ensemble of the shifted operators.
ExtractedEnsemble witness_to_ensemble(const std::vector<HermitianOperator>& witnesses, double drop_tol = 1e-9);

/// W_i = Z_i - I/d: sum_i tr(W_i N_i) <= 0 for free N and equals s* > 0 at M.
std::vector<HermitianOperator> separating_witness(const RobustnessCertificate& cert);

struct CertificateCheck {
  bool free_povm_member = false;
  double membership_violation = 0.0;
  /// max_i || M_i + s N_i - (1 + s) F_i ||_F
  double decomposition_error = 0.0;
  double witness_error = 0.0;
  double psucc_measurement = 0.0;
  double psucc_free = 0.0;
  double ratio = 0.0;
  double ratio_error = 0.0;
  int sandwich_trials = 0;
  /// min over trials of (1 + s) max_free psucc - psucc(E, M); negative is a violation.
  double worst_sandwich_margin = 0.0;
  bool passes = false;
  std::vector<std::string> failures;
};

struct VerifyOptions {
  /// Bound on |ratio - (1 + s)| at the extracted ensemble.
  double tol = 1e-5;
  double membership_tol = 1e-6;
  double decomposition_tol = 1e-6;
  double sandwich_slack = 1e-8;
  int sandwich_trials = 10;
  std::uint64_t seed = 0;
  sdp::Options solver;
};

/// Recomputes the certificate's claims from scratch.
CertificateCheck verify_certificate(const Povm& m, const FreeSetSpec& f, const RobustnessCertificate& cert,
                                    const VerifyOptions& opts = {});

Json certificate_to_json(const RobustnessCertificate& cert);
RobustnessCertificate certificate_from_json(const Json& j);
Json certificate_check_to_json(const CertificateCheck& check);
Json solve_summary_to_json(const sdp::SolveSummary& s);

}  // namespace povmforge
