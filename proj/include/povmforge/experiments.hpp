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

// Seeded experiment runners behind the command-line tool. Every runner is
// deterministic for fixed arguments, independent of the number of jobs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "povmforge/freesets.hpp"
#include "povmforge/povm_json.hpp"
#include "povmforge/robustness.hpp"

namespace povmforge {

/// Runs body(0..count-1) on up to `jobs` threads. The first exception thrown
/// by any call is rethrown after all threads finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// "incoherent", "trivial", "ppt:2x3" (all single-factor cuts), an inline
/// JSON object, or "@path" to a JSON file.
FreeSetSpec parse_free_set_arg(const std::string& arg);

/// Everything wrong with a POVM or ensemble file, one line per problem.
struct ValidationReport {
  std::string kind;  // "povm" or "ensemble"
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
ValidationReport validate_json(const Json& j);

// Incoherent sweep ---------------------------------------------------------------

struct SweepRow {
  std::size_t d = 0;
  std::size_t n = 0;
  double computed = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
  std::string status;  // "optimal", or the error message
  int iterations = 0;
};

/// Robustness against the incoherent set of fourier_povm(d) padded to n
/// outcomes when n >= d, truncated_fourier_povm(d, n) when n < d.
std::vector<SweepRow> incoherent_sweep(std::size_t dmin, std::size_t dmax, std::size_t nmin, std::size_t nmax,
                                       int jobs = 1);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Bipartite bounds ---------------------------------------------------------------

struct BipartiteRecord {
  std::size_t dA = 0;
  std::size_t dB = 0;
  std::uint64_t seed = 0;
  std::string exactness;

  double robustness = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double robustness_dual_value = 0.0;
  double ratio_error = 0.0;

  double bell_psucc = 0.0;
  double bell_expected = 0.0;
  std::string bell_exactness;

  double depolarize_t = 0.0;
  std::size_t depolarize_trials = 0;
  std::size_t depolarize_outcomes = 0;
  std::size_t depolarize_members = 0;
  double depolarize_min_pt_eigenvalue = 0.0;

  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct BipartiteOptions {
  std::size_t trials = 20;
  std::size_t outcomes = 4;
  double bound_tol = 1e-5;
  double psucc_tol = 1e-6;
  double pt_tol = 1e-8;
  int jobs = 1;
};

BipartiteRecord bipartite_sep(std::size_t dA, std::size_t dB, std::uint64_t seed, const BipartiteOptions& opts = {});
Json bipartite_to_json(const BipartiteRecord& r);
BipartiteRecord bipartite_from_json(const Json& j);

// Multiqubit Haar ensembles --------------------------------------------------------

struct HaarTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double psucc_pgm = 0.0;
  double psucc_optimal = 0.0;
  double psucc_ppt = 0.0;
  double ratio = 0.0;
  std::string optimal_exactness;
  std::string ppt_exactness;
  std::string status;  // "ok" or the error message
};

struct HaarSummary {
  std::size_t qubits = 0;
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
  double mean_pgm = 0.0;
  double mean_optimal = 0.0;
  double mean_ppt = 0.0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  /// max over trials of psucc(PGM) - optimal.
  double max_pgm_excess = 0.0;
  /// max over trials of ppt - optimal.
  double max_restricted_excess = 0.0;
};

struct HaarReport {
  std::vector<HaarTrial> trials;
  HaarSummary summary;
};

/// Trial k uses haar_ensemble(qubits, 2^qubits, split_seed(seed, k)).
HaarReport multiqubit_haar(std::size_t qubits, std::size_t trials, std::uint64_t seed, int jobs = 1);
std::string haar_to_csv(const HaarReport& report);

}  // namespace povmforge
