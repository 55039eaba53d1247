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

#include "povmforge/discrimination.hpp"

#include <cmath>
#include <string>

#include "povmforge/errors.hpp"

namespace povmforge {

namespace {

void require_matching(const Ensemble& e, const Povm& m) {
  if (e.size() != m.num_outcomes()) {
    throw SizeError("psucc: ensemble has " + std::to_string(e.size()) + " states but the POVM has " +
                    std::to_string(m.num_outcomes()) + " outcomes");
  }
  if (e.dim() != m.dim()) {
    throw DimensionError("psucc: ensemble dimension " + std::to_string(e.dim()) + " differs from POVM dimension " +
                         std::to_string(m.dim()));
  }
}

// -sum_i q_i tr(X_i rho_i), the objective of every discrimination program.
sdp::LinExpr negated_success(const Ensemble& e, const std::vector<sdp::MatExpr>& effects) {
  sdp::LinExpr obj;
  for (std::size_t i = 0; i < e.size(); ++i) obj -= e[i].prob * effects[i].inner(e[i].state);
  return obj;
}

DiscriminationResult finish(const Ensemble& e, const sdp::Solution& sol, const std::vector<sdp::HermitianVar>& vars,
                            const char* what) {
  if (sol.status != sdp::Status::Optimal) {
    throw NumericalError(std::string(what) + ": solver returned " + sdp::to_string(sol.status) + " (" + sol.message +
                         ")");
  }
  std::vector<HermitianOperator> effects;
  effects.reserve(vars.size());
  for (const auto& v : vars) effects.push_back(sol.value(v));
  DiscriminationResult r;
  r.optimizer = repair_povm(std::move(effects));
  r.value = psucc(e, *r.optimizer);
  r.diagnostics = sdp::summarize(sol);
  return r;
}

}  // namespace

double psucc(const Ensemble& e, const Povm& m) {
  require_matching(e, m);
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) total += e[i].prob * frob_inner(m[i], e[i].state);
  return total;
}

DiscriminationResult optimal_psucc(const Ensemble& e, const sdp::Options& opts) {
  const std::size_t d = e.dim();
  if (e.size() == 1) {
    DiscriminationResult r;
    r.optimizer = validate_povm({HermitianOperator::identity(d)});
    r.value = psucc(e, *r.optimizer);
    return r;
  }
  sdp::Problem p;
  std::vector<sdp::HermitianVar> vars;
  std::vector<sdp::MatExpr> effects;
  sdp::MatExpr sum(d);
  for (std::size_t i = 0; i < e.size(); ++i) {
    vars.push_back(p.add_psd_variable(d, "effect"));
    effects.push_back(vars.back().expr());
    sum += effects.back();
  }
  sum -= HermitianOperator::identity(d);
  p.add_equality(sum);
  p.set_objective(negated_success(e, effects));
  return finish(e, sdp::solve(p, opts), vars, "optimal_psucc");
}

DiscriminationResult max_psucc_over_free(const Ensemble& e, const FreeSetSpec& f, const sdp::Options& opts) {
  const std::size_t d = e.dim();
  f.check_compatible(d, e.size());
  if (const auto* hull = std::get_if<ConvexHullSet>(&f.variant())) {
    // A linear objective over a simplex peaks at a vertex.
    DiscriminationResult r;
    for (const auto& g : hull->generators) {
      const double v = psucc(e, g);
      if (!r.optimizer || v > r.value) {
        r.value = v;
        r.optimizer = g;
      }
    }
    r.restricted_to = f;
    return r;
  }
  sdp::Problem p;
  std::vector<sdp::HermitianVar> vars;
  std::vector<sdp::MatExpr> effects;
  for (std::size_t i = 0; i < e.size(); ++i) {
    vars.push_back(p.add_hermitian(d));
    effects.push_back(vars.back().expr());
  }
  compile_membership_constraints(f, p, effects, 1.0);
  p.set_objective(negated_success(e, effects));
  auto r = finish(e, sdp::solve(p, opts), vars, "max_psucc_over_free");
  r.restricted_to = f;
  r.exactness = f.discrimination_exactness();
  return r;
}

Povm pretty_good_measurement(const Ensemble& e) {
  const std::size_t d = e.dim();
  const HermitianOperator avg = e.average_state();
  const ComplexMatrix root = inv_sqrt_psd(avg).matrix();
  std::vector<HermitianOperator> effects;
  effects.reserve(e.size());
  HermitianOperator support = HermitianOperator::zero(d);
  for (const auto& item : e.items()) {
    effects.emplace_back(ComplexMatrix(item.prob * root * item.state.matrix() * root));
    support += effects.back();
  }
  effects.back() += HermitianOperator::identity(d) - support;
  return repair_povm(std::move(effects));
}

bool classical_indistinguishability_check(const Ensemble& e, double tol) {
  const double q = 1.0 / static_cast<double>(e.size());
  const double diag = 1.0 / static_cast<double>(e.dim());
  for (const auto& item : e.items()) {
    if (std::abs(item.prob - q) > tol) return false;
    for (std::size_t j = 0; j < e.dim(); ++j) {
      if (std::abs(item.state(j, j).real() - diag) > tol) return false;
    }
  }
  return true;
}

}  // namespace povmforge
