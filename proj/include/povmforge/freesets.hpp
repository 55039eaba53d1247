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

// Free sets of measurements: incoherent, trivial, PPT (a relaxation of
// separable) and convex hulls of listed POVMs. Each set knows how to test
// membership and how to express itself as SDP constraints.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "povmforge/povm.hpp"
#include "povmforge/povm_json.hpp"
#include "povmforge/sdp.hpp"

namespace povmforge {

struct IncoherentSet {};
struct TrivialSet {};
struct PptSet {
  /// Local dimensions, most significant factor first.
  std::vector<std::size_t> dims;
  /// Each cut lists the factors transposed together.
  std::vector<std::vector<std::size_t>> cuts;
};
struct ConvexHullSet {
  std::vector<Povm> generators;
};

enum class FreeSetKind { Incoherent, Trivial, Ppt, ConvexHull };

/// How a computed number relates to the quantity over the true free set.
enum class Exactness { Exact, LowerBound, UpperBound };
const char* to_string(Exactness e);

class FreeSetSpec {
 public:
  using Variant = std::variant<IncoherentSet, TrivialSet, PptSet, ConvexHullSet>;

  static FreeSetSpec incoherent();
  static FreeSetSpec trivial();
  static FreeSetSpec ppt(std::vector<std::size_t> dims, std::vector<std::vector<std::size_t>> cuts);
  /// PPT across every single-factor cut; for two factors the single cut {0}.
  static FreeSetSpec ppt_single_cuts(std::vector<std::size_t> dims);
  static FreeSetSpec hull(std::vector<Povm> generators);

  FreeSetKind kind() const;
  std::string name() const;
  const Variant& variant() const { return v_; }

  /// Throws DimensionError if measurements with this (d, n) cannot be
  /// compared against the set.
  void check_compatible(std::size_t d, std::size_t n) const;

  /// False only for PPT sets outside 2x2 and 2x3, where PPT is strictly
  /// larger than the separable set.
  bool relaxation_is_exact() const;
  /// Exactness of a robustness value computed against this set.
  Exactness robustness_exactness() const;
  /// Exactness of a restricted discrimination value computed against this set.
  Exactness discrimination_exactness() const;

 private:
  explicit FreeSetSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct MembershipReport {
  bool member = false;
  /// Size of the worst violation (off-diagonal modulus, distance from the
  /// identity line, negative PT eigenvalue, or hull distance).
  double violation = 0.0;
  std::size_t effect = 0;
  std::string detail;
};

MembershipReport is_member(const FreeSetSpec& f, const Povm& m, double tol = 1e-8);

/// Counts of what compile_membership_constraints added to a problem.
struct MembershipConstraints {
  std::size_t psd_blocks = 0;
  std::size_t pt_blocks = 0;
  /// Effects whose diagonal entries were each constrained non-negative.
  std::size_t diagonal_blocks = 0;
  std::size_t nonneg_scalars = 0;
  /// Off-diagonal zeros, effect = c I, or effect = sum_k lambda_k F^(k).
  std::size_t structure_equalities = 0;
  std::size_t completeness_equalities = 0;
  /// Scalar weights introduced (c_i for trivial, lambda_k for hulls).
  std::vector<sdp::VarIndex> weights;
};

/// Adds constraints stating that `effects` lie in the cone over the free set
/// with total weight `scale`, i.e. effects / scale is a free POVM. With
/// scale = 1 this is plain membership.
MembershipConstraints compile_membership_constraints(const FreeSetSpec& f, sdp::Problem& problem,
                                                     const std::vector<sdp::MatExpr>& effects,
                                                     const sdp::LinExpr& scale);

struct DualForm {
  bool supported = false;
  std::string reason;
  std::size_t constraints = 0;
};

/// Adds the finite form of "sum_i tr(Z_i N_i) <= 1 for every free N" on the
/// given (already PSD) witness expressions. PPT sets are not supported; their
/// witnesses come from primal multipliers.
DualForm dual_constraint_form(const FreeSetSpec& f, sdp::Problem& problem,
                              const std::vector<sdp::MatExpr>& witnesses);

/// {"variant": "incoherent" | "trivial" | "ppt", "dims": [...], "cuts": [[...], ...]}
/// or {"variant": "hull", "generators": [povm, ...]}.
Json free_set_to_json(const FreeSetSpec& f);
FreeSetSpec free_set_from_json(const Json& j);

}  // namespace povmforge
