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

#include "povmforge/freesets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "povmforge/errors.hpp"

namespace povmforge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

std::string join(const std::vector<std::size_t>& v, const char* sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
  return out.str();
}

}  // namespace

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact:
      return "exact";
    case Exactness::LowerBound:
      return "lower-bound";
    case Exactness::UpperBound:
      return "upper-bound";
  }
  return "unknown";
}

// FreeSetSpec --------------------------------------------------------------------

FreeSetSpec FreeSetSpec::incoherent() { return FreeSetSpec(IncoherentSet{}); }

FreeSetSpec FreeSetSpec::trivial() { return FreeSetSpec(TrivialSet{}); }

FreeSetSpec FreeSetSpec::ppt(std::vector<std::size_t> dims, std::vector<std::vector<std::size_t>> cuts) {
  if (dims.size() < 2) throw DimensionError("ppt: need at least two tensor factors");
  for (std::size_t d : dims) {
    if (d < 2) throw DimensionError("ppt: every local dimension must be at least 2");
  }
  if (product(dims) > kDefaultDimCap) throw SizeError("ppt: total dimension exceeds cap");
  if (cuts.empty()) throw DimensionError("ppt: at least one cut is required");
  for (auto& cut : cuts) {
    std::sort(cut.begin(), cut.end());
    if (cut.empty()) throw DimensionError("ppt: empty cut");
    if (std::adjacent_find(cut.begin(), cut.end()) != cut.end()) throw DimensionError("ppt: repeated factor in cut");
    if (cut.back() >= dims.size()) throw DimensionError("ppt: cut refers to a missing factor");
    if (cut.size() == dims.size()) throw DimensionError("ppt: a cut must leave at least one factor untouched");
  }
  return FreeSetSpec(PptSet{std::move(dims), std::move(cuts)});
}

FreeSetSpec FreeSetSpec::ppt_single_cuts(std::vector<std::size_t> dims) {
  std::vector<std::vector<std::size_t>> cuts;
  // With two factors, transposing either side gives the same spectrum.
  const std::size_t count = dims.size() == 2 ? 1 : dims.size();
  for (std::size_t k = 0; k < count; ++k) cuts.push_back({k});
  return ppt(std::move(dims), std::move(cuts));
}

FreeSetSpec FreeSetSpec::hull(std::vector<Povm> generators) {
  if (generators.empty()) throw DimensionError("hull: at least one generator is required");
  for (const auto& g : generators) {
    if (g.dim() != generators.front().dim() || g.num_outcomes() != generators.front().num_outcomes()) {
      throw DimensionError("hull: generators differ in dimension or outcome count");
    }
  }
  return FreeSetSpec(ConvexHullSet{std::move(generators)});
}

FreeSetKind FreeSetSpec::kind() const {
  return std::visit(Overloaded{[](const IncoherentSet&) { return FreeSetKind::Incoherent; },
                               [](const TrivialSet&) { return FreeSetKind::Trivial; },
                               [](const PptSet&) { return FreeSetKind::Ppt; },
                               [](const ConvexHullSet&) { return FreeSetKind::ConvexHull; }},
                    v_);
}

std::string FreeSetSpec::name() const {
  return std::visit(Overloaded{[](const IncoherentSet&) -> std::string { return "incoherent"; },
                               [](const TrivialSet&) -> std::string { return "trivial"; },
                               [](const PptSet& p) -> std::string {
                                 std::string s = "ppt(" + join(p.dims, "x") + ";";
                                 for (std::size_t k = 0; k < p.cuts.size(); ++k) {
                                   s += (k ? "|" : "") + join(p.cuts[k], ",");
                                 }
                                 return s + ")";
                               },
                               [](const ConvexHullSet& h) -> std::string {
                                 return "hull(" + std::to_string(h.generators.size()) + ")";
                               }},
                    v_);
}

void FreeSetSpec::check_compatible(std::size_t d, std::size_t n) const {
  if (const auto* p = std::get_if<PptSet>(&v_)) {
    if (product(p->dims) != d) {
      throw DimensionError("ppt free set has dimension " + std::to_string(product(p->dims)) +
                           " but the measurement acts on dimension " + std::to_string(d));
    }
  }
  if (const auto* h = std::get_if<ConvexHullSet>(&v_)) {
    const Povm& g = h->generators.front();
    if (g.dim() != d || g.num_outcomes() != n) {
      throw DimensionError("hull generators are (d=" + std::to_string(g.dim()) + ", n=" +
                           std::to_string(g.num_outcomes()) + ") but the measurement is (d=" + std::to_string(d) +
                           ", n=" + std::to_string(n) + ")");
    }
  }
}

bool FreeSetSpec::relaxation_is_exact() const {
  const auto* p = std::get_if<PptSet>(&v_);
  if (!p) return true;
  if (p->dims.size() != 2) return false;
  const auto lo = std::min(p->dims[0], p->dims[1]);
  const auto hi = std::max(p->dims[0], p->dims[1]);
  return lo == 2 && (hi == 2 || hi == 3);
}

Exactness FreeSetSpec::robustness_exactness() const {
  return relaxation_is_exact() ? Exactness::Exact : Exactness::LowerBound;
}

Exactness FreeSetSpec::discrimination_exactness() const {
  return relaxation_is_exact() ? Exactness::Exact : Exactness::UpperBound;
}

// Membership ---------------------------------------------------------------------

namespace {

MembershipReport hull_membership(const ConvexHullSet& h, const Povm& m, double tol) {
  sdp::Problem p;
  const std::size_t d = m.dim();
  const auto eps = p.add_scalar();
  std::vector<sdp::VarIndex> weights;
  sdp::LinExpr total;
  for (std::size_t k = 0; k < h.generators.size(); ++k) {
    weights.push_back(p.add_scalar());
    p.add_nonneg(sdp::LinExpr::variable(weights.back()));
    total += sdp::LinExpr::variable(weights.back());
  }
  p.add_equality(total - 1.0);
  for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
    // diff = M_i - sum_k lambda_k F^(k)_i, bounded in operator norm by eps.
    sdp::MatExpr diff(m[i]);
    for (std::size_t k = 0; k < h.generators.size(); ++k) diff -= sdp::MatExpr::scaled(weights[k], h.generators[k][i]);
    sdp::MatExpr upper(d);
    upper.add_identity_multiple(sdp::LinExpr::variable(eps));
    sdp::MatExpr lower = upper;
    upper -= diff;
    lower += diff;
    p.add_psd(std::move(upper));
    p.add_psd(std::move(lower));
  }
  p.set_objective(sdp::LinExpr::variable(eps));
  const auto sol = sdp::solve(p);
  if (sol.status != sdp::Status::Optimal) {
    throw NumericalError(std::string("hull membership: solver returned ") + sdp::to_string(sol.status) + " (" +
                         sol.message + ")");
  }
  MembershipReport r;
  r.violation = std::max(0.0, sol.value(eps));
  r.member = r.violation <= tol;
  if (!r.member) r.detail = "operator-norm distance to the hull is " + std::to_string(r.violation);
  return r;
}

}  // namespace

MembershipReport is_member(const FreeSetSpec& f, const Povm& m, double tol) {
  f.check_compatible(m.dim(), m.num_outcomes());
  const std::size_t d = m.dim();
  MembershipReport worst;
  worst.member = true;
  auto consider = [&](double violation, std::size_t effect, const std::string& what) {
    if (violation > worst.violation) {
      worst.violation = violation;
      worst.effect = effect;
      worst.detail = what;
    }
  };
  return std::visit(
      Overloaded{
          [&](const IncoherentSet&) {
            for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
              ComplexMatrix off = m[i].matrix();
              off.diagonal().setZero();
              consider(off.cwiseAbs().maxCoeff(), i, "off-diagonal entry");
            }
            worst.member = worst.violation <= tol;
            return worst;
          },
          [&](const TrivialSet&) {
            for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
              ComplexMatrix diff = m[i].matrix();
              diff.diagonal().array() -= m[i].trace() / static_cast<double>(d);
              consider(diff.cwiseAbs().maxCoeff(), i, "distance from a multiple of the identity");
            }
            worst.member = worst.violation <= tol;
            return worst;
          },
          [&](const PptSet& p) {
            for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
              for (const auto& cut : p.cuts) {
                const double lmin = min_eigenvalue(partial_transpose(m[i], p.dims, cut));
                consider(-lmin, i, "negative partial-transpose eigenvalue across cut {" + join(cut, ",") + "}");
              }
            }
            worst.member = worst.violation <= tol;
            return worst;
          },
          [&](const ConvexHullSet& h) { return hull_membership(h, m, tol); }},
      f.variant());
}

// Compilation --------------------------------------------------------------------

MembershipConstraints compile_membership_constraints(const FreeSetSpec& f, sdp::Problem& problem,
                                                     const std::vector<sdp::MatExpr>& effects,
                                                     const sdp::LinExpr& scale) {
  if (effects.empty()) throw DimensionError("compile_membership_constraints: no effects");
  const std::size_t d = effects.front().dim();
  for (const auto& e : effects) {
    if (e.dim() != d) throw DimensionError("compile_membership_constraints: effects differ in dimension");
  }
  f.check_compatible(d, effects.size());
  MembershipConstraints out;

  std::visit(
      Overloaded{
          [&](const IncoherentSet&) {
            for (std::size_t i = 0; i < effects.size(); ++i) {
              for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t k = j + 1; k < d; ++k) {
                  problem.add_equality(effects[i].entry_real(j, k));
                  problem.add_equality(effects[i].entry_imag(j, k));
                  out.structure_equalities += 2;
                }
              }
              for (std::size_t j = 0; j < d; ++j) {
                problem.add_nonneg(effects[i].entry_real(j, j), "diag");
              }
              ++out.diagonal_blocks;
            }
            // Off-diagonals are already zero, so completeness is only needed
            // on the diagonal.
            for (std::size_t j = 0; j < d; ++j) {
              sdp::LinExpr sum = sdp::LinExpr() - scale;
              for (const auto& e : effects) sum += e.entry_real(j, j);
              problem.add_equality(std::move(sum));
              ++out.completeness_equalities;
            }
          },
          [&](const TrivialSet&) {
            sdp::LinExpr sum = sdp::LinExpr() - scale;
            for (const auto& e : effects) {
              const auto c = problem.add_scalar();
              out.weights.push_back(c);
              problem.add_nonneg(sdp::LinExpr::variable(c), "weight");
              ++out.nonneg_scalars;
              sdp::MatExpr diff = e;
              diff.add_identity_multiple(sdp::LinExpr::variable(c, -1.0));
              out.structure_equalities += problem.add_equality(diff).size();
              sum += sdp::LinExpr::variable(c);
            }
            problem.add_equality(std::move(sum));
            ++out.completeness_equalities;
          },
          [&](const PptSet& p) {
            sdp::MatExpr sum(d);
            for (const auto& e : effects) {
              problem.add_psd(e, "effect");
              ++out.psd_blocks;
              for (const auto& cut : p.cuts) {
                problem.add_psd(e.partial_transpose(p.dims, cut), "pt");
                ++out.pt_blocks;
              }
              sum += e;
            }
            sum.add_identity_multiple(sdp::LinExpr() - scale);
            out.completeness_equalities += problem.add_equality(sum).size();
          },
          [&](const ConvexHullSet& h) {
            sdp::LinExpr total = sdp::LinExpr() - scale;
            for (std::size_t k = 0; k < h.generators.size(); ++k) {
              const auto w = problem.add_scalar();
              out.weights.push_back(w);
              problem.add_nonneg(sdp::LinExpr::variable(w), "weight");
              ++out.nonneg_scalars;
              total += sdp::LinExpr::variable(w);
            }
            problem.add_equality(std::move(total));
            ++out.completeness_equalities;
            for (std::size_t i = 0; i < effects.size(); ++i) {
              sdp::MatExpr diff = effects[i];
              for (std::size_t k = 0; k < h.generators.size(); ++k) {
                diff -= sdp::MatExpr::scaled(out.weights[k], h.generators[k][i]);
              }
              out.structure_equalities += problem.add_equality(diff).size();
            }
          }},
      f.variant());
  return out;
}

DualForm dual_constraint_form(const FreeSetSpec& f, sdp::Problem& problem,
                              const std::vector<sdp::MatExpr>& witnesses) {
  if (witnesses.empty()) throw DimensionError("dual_constraint_form: no witnesses");
  const std::size_t d = witnesses.front().dim();
  f.check_compatible(d, witnesses.size());
  DualForm out;
  out.supported = true;
  std::visit(Overloaded{[&](const IncoherentSet&) {
                          const auto& last = witnesses.back();
                          for (std::size_t a = 0; a + 1 < witnesses.size(); ++a) {
                            for (std::size_t j = 0; j < d; ++j) {
                              problem.add_equality(witnesses[a].entry_real(j, j) - last.entry_real(j, j));
                              ++out.constraints;
                            }
                          }
                          problem.add_equality(last.trace() - 1.0);
                          ++out.constraints;
                        },
                        [&](const TrivialSet&) {
                          for (const auto& z : witnesses) {
                            problem.add_nonneg(sdp::LinExpr(1.0) - z.trace(), "trace-cap");
                            ++out.constraints;
                          }
                        },
                        [&](const PptSet&) {
                          out.supported = false;
                          out.reason =
                              "the PPT free set has no finite dual form here; use the multipliers of the primal "
                              "noise constraints";
                        },
                        [&](const ConvexHullSet& h) {
                          for (const auto& g : h.generators) {
                            sdp::LinExpr e(1.0);
                            for (std::size_t i = 0; i < witnesses.size(); ++i) e -= witnesses[i].inner(g[i]);
                            problem.add_nonneg(e, "generator");
                            ++out.constraints;
                          }
                        }},
             f.variant());
  return out;
}

// JSON ---------------------------------------------------------------------------

Json free_set_to_json(const FreeSetSpec& f) {
  return std::visit(Overloaded{[](const IncoherentSet&) { return Json{{"variant", "incoherent"}}; },
                               [](const TrivialSet&) { return Json{{"variant", "trivial"}}; },
                               [](const PptSet& p) { return Json{{"variant", "ppt"}, {"dims", p.dims}, {"cuts", p.cuts}}; },
                               [](const ConvexHullSet& h) {
                                 Json gens = Json::array();
                                 for (const auto& g : h.generators) gens.push_back(povm_to_json(g));
                                 return Json{{"variant", "hull"}, {"generators", std::move(gens)}};
                               }},
                    f.variant());
}

FreeSetSpec free_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string()) {
    throw ParseError("free set: expected an object with a string field 'variant'");
  }
  const std::string variant = j["variant"].get<std::string>();
  if (variant == "incoherent") return FreeSetSpec::incoherent();
  if (variant == "trivial") return FreeSetSpec::trivial();
  if (variant == "ppt") {
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::size_t>> cuts;
    try {
      dims = j.at("dims").get<std::vector<std::size_t>>();
      if (j.contains("cuts")) cuts = j.at("cuts").get<std::vector<std::vector<std::size_t>>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("free set: malformed dims/cuts: ") + e.what());
    }
    if (cuts.empty()) return FreeSetSpec::ppt_single_cuts(std::move(dims));
    return FreeSetSpec::ppt(std::move(dims), std::move(cuts));
  }
  if (variant == "hull") {
    if (!j.contains("generators") || !j["generators"].is_array()) {
      throw ParseError("free set: 'generators' missing or not a list");
    }
    std::vector<Povm> gens;
    for (std::size_t k = 0; k < j["generators"].size(); ++k) {
      try {
        gens.push_back(povm_from_json(j["generators"][k]));
      } catch (const ParseError& e) {
        throw ParseError("generators[" + std::to_string(k) + "]." + e.what());
      }
    }
    return FreeSetSpec::hull(std::move(gens));
  }
  throw ParseError("free set: unknown variant '" + variant + "'");
}

}  // namespace povmforge
