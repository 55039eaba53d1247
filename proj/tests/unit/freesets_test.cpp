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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "povmforge/errors.hpp"
#include "povmforge/freesets.hpp"
#include "povmforge/povm.hpp"
#include "test_util.hpp"

namespace pf = povmforge;
namespace sdp = povmforge::sdp;
using pf::ComplexMatrix;
using pf::FreeSetSpec;
using pf::HermitianOperator;

namespace {

// Effects A_a (x) B_b of two local POVMs, then randomly coarse-grained. Every
// effect is a product of PSD operators, so the measurement is separable.
pf::Povm random_separable_povm(std::size_t da, std::size_t db, std::size_t n, pf::Rng& rng) {
  auto a = pf::random_povm(da, 2, rng);
  auto b = pf::random_povm(db, 2, rng);
  std::vector<HermitianOperator> effects;
  for (const auto& ea : a.effects()) {
    for (const auto& eb : b.effects()) effects.push_back(pf::kron(ea, eb));
  }
  auto product = pf::validate_povm(std::move(effects));
  return pf::post_process(product, pf::StochasticMatrix::random(n, 4, rng));
}

// Wootters concurrence of a two-qubit density operator. Zero iff separable.
double concurrence(const HermitianOperator& rho) {
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix flipped = yy * rho.matrix().conjugate() * yy;
  const ComplexMatrix root = pf::sqrt_psd(rho).matrix();
  // Eigenvalues of sqrt(rho) flipped sqrt(rho) are the squares of the Wootters values.
  auto ev = pf::eig_herm(HermitianOperator(ComplexMatrix(root * flipped * root))).values;
  std::vector<double> l;
  for (Eigen::Index k = 0; k < ev.size(); ++k) l.push_back(std::sqrt(std::max(0.0, ev(k))));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Pins n Hermitian variables to `m`, adds the membership constraints and
// reports whether the resulting problem is feasible.
sdp::Status pinned_membership_status(const FreeSetSpec& f, const pf::Povm& m) {
  sdp::Problem p;
  std::vector<sdp::MatExpr> effects;
  for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
    auto v = p.add_hermitian(m.dim());
    effects.push_back(v.expr());
    p.add_equality(v.expr() - m[i]);
  }
  pf::compile_membership_constraints(f, p, effects, 1.0);
  p.set_objective(effects.front().trace());
  return sdp::solve(p).status;
}

}  // namespace

TEST(FreeSets, IncoherentExamples) {
  auto inc = FreeSetSpec::incoherent();
  EXPECT_TRUE(pf::is_member(inc, pf::computational_basis_povm(3)).member);
  auto r = pf::is_member(inc, pf::fourier_povm(2));
  EXPECT_FALSE(r.member);
  EXPECT_NEAR(r.violation, 0.5, 1e-12);
}

TEST(FreeSets, TrivialExamples) {
  auto tr = FreeSetSpec::trivial();
  EXPECT_TRUE(pf::is_member(tr, pf::uniform_trivial_povm(3, 4)).member);
  EXPECT_TRUE(pf::is_member(tr, pf::trivial_povm(2, {0.3, 0.7})).member);
  EXPECT_FALSE(pf::is_member(tr, pf::computational_basis_povm(2)).member);
}

TEST(FreeSets, BellMeasurementAndItsDepolarization) {
  auto ppt = FreeSetSpec::ppt_single_cuts({2, 2});
  auto bell = pf::bell_measurement(2);
  auto r = pf::is_member(ppt, bell);
  EXPECT_FALSE(r.member);
  EXPECT_NEAR(r.violation, 0.5, 1e-12);
  EXPECT_TRUE(pf::is_member(ppt, pf::depolarize(bell, 1.0 / 3.0)).member);
  EXPECT_FALSE(pf::is_member(ppt, pf::depolarize(bell, 0.34)).member);
}

TEST(FreeSets, HullMembership) {
  auto rng = pf::make_rng(40);
  auto g1 = pf::random_povm(2, 3, rng);
  auto g2 = pf::random_povm(2, 3, rng);
  auto hull = FreeSetSpec::hull({g1, g2});
  EXPECT_TRUE(pf::is_member(hull, pf::convex_combine(0.3, g1, g2), 1e-6).member);
  auto outside = pf::is_member(hull, pf::random_povm(2, 3, rng), 1e-6);
  EXPECT_FALSE(outside.member);
  EXPECT_GT(outside.violation, 1e-3);
}

TEST(FreeSets, DimensionChecks) {
  EXPECT_THROW(pf::is_member(FreeSetSpec::ppt_single_cuts({2, 2}), pf::computational_basis_povm(3)),
               pf::DimensionError);
  auto rng = pf::make_rng(1);
  auto hull = FreeSetSpec::hull({pf::random_povm(2, 2, rng)});
  EXPECT_THROW(pf::is_member(hull, pf::random_povm(2, 3, rng)), pf::DimensionError);
  EXPECT_THROW(FreeSetSpec::hull({pf::random_povm(2, 2, rng), pf::random_povm(3, 2, rng)}), pf::DimensionError);
  EXPECT_THROW(FreeSetSpec::ppt({2, 2}, {}), pf::DimensionError);
  EXPECT_THROW(FreeSetSpec::ppt({2, 2}, {{0, 1}}), pf::DimensionError);
  EXPECT_THROW(FreeSetSpec::ppt({2, 2}, {{2}}), pf::DimensionError);
}

TEST(FreeSets, Exactness) {
  EXPECT_TRUE(FreeSetSpec::ppt_single_cuts({2, 2}).relaxation_is_exact());
  EXPECT_TRUE(FreeSetSpec::ppt_single_cuts({3, 2}).relaxation_is_exact());
  EXPECT_FALSE(FreeSetSpec::ppt_single_cuts({3, 3}).relaxation_is_exact());
  EXPECT_FALSE(FreeSetSpec::ppt_single_cuts({2, 2, 2}).relaxation_is_exact());
  EXPECT_EQ(FreeSetSpec::ppt_single_cuts({2, 2, 2}).robustness_exactness(), pf::Exactness::LowerBound);
  EXPECT_EQ(FreeSetSpec::ppt_single_cuts({2, 4}).discrimination_exactness(), pf::Exactness::UpperBound);
  EXPECT_EQ(FreeSetSpec::incoherent().robustness_exactness(), pf::Exactness::Exact);
  EXPECT_EQ(FreeSetSpec::ppt_single_cuts({2, 2, 2}).variant().index(), 2u);
  EXPECT_EQ(std::get<pf::PptSet>(FreeSetSpec::ppt_single_cuts({2, 2, 2}).variant()).cuts.size(), 3u);
}

TEST(FreeSetsCompile, IncoherentQubitCounts) {
  sdp::Problem p;
  std::vector<sdp::MatExpr> effects;
  for (int i = 0; i < 2; ++i) effects.push_back(p.add_hermitian(2).expr());
  auto c = pf::compile_membership_constraints(FreeSetSpec::incoherent(), p, effects, 1.0);
  EXPECT_EQ(c.diagonal_blocks, 2u);
  EXPECT_EQ(c.structure_equalities, 4u);
  EXPECT_EQ(c.completeness_equalities, 2u);
  EXPECT_EQ(c.psd_blocks, 0u);
}

TEST(FreeSetsCompile, PptBlockShapes) {
  sdp::Problem p;
  std::vector<sdp::MatExpr> effects;
  for (int i = 0; i < 3; ++i) effects.push_back(p.add_hermitian(4).expr());
  auto c = pf::compile_membership_constraints(FreeSetSpec::ppt_single_cuts({2, 2}), p, effects, 1.0);
  EXPECT_EQ(c.psd_blocks, 3u);
  EXPECT_EQ(c.pt_blocks, 3u);
  EXPECT_EQ(c.completeness_equalities, 16u);
  ASSERT_EQ(p.cones().size(), 6u);
  for (const auto& cone : p.cones()) EXPECT_EQ(cone.expr.dim(), 4u);
}

TEST(FreeSetsCompile, SingleGeneratorHullPinsEffects) {
  auto rng = pf::make_rng(77);
  auto g = pf::random_povm(3, 2, rng);
  sdp::Problem p;
  std::vector<sdp::HermitianVar> vars;
  std::vector<sdp::MatExpr> effects;
  for (int i = 0; i < 2; ++i) {
    vars.push_back(p.add_hermitian(3));
    effects.push_back(vars.back().expr());
  }
  pf::compile_membership_constraints(FreeSetSpec::hull({g}), p, effects, 1.0);
  p.set_objective(effects[0].inner(pf::testing::random_hermitian(3, rng)));
  auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::Optimal) << sol.message;
  for (int i = 0; i < 2; ++i) EXPECT_LE((sol.value(vars[i]).matrix() - g[i].matrix()).norm(), 1e-7);
}

TEST(FreeSetsCompile, PinnedFeasibilityAgreesWithMembership) {
  auto rng = pf::make_rng(300);
  auto gens = std::vector<pf::Povm>{pf::random_povm(2, 2, rng), pf::random_povm(2, 2, rng)};
  struct Case {
    FreeSetSpec set;
    pf::Povm inside;
    pf::Povm outside;
  };
  std::vector<Case> cases{
      {FreeSetSpec::incoherent(), pf::random_incoherent_povm(3, 3, rng), pf::random_povm(3, 3, rng)},
      {FreeSetSpec::trivial(), pf::trivial_povm(2, {0.2, 0.8}), pf::random_povm(2, 2, rng)},
      {FreeSetSpec::ppt_single_cuts({2, 2}), random_separable_povm(2, 2, 3, rng), pf::bell_measurement(2)},
      {FreeSetSpec::hull(gens), pf::convex_combine(0.6, gens[0], gens[1]), pf::random_povm(2, 2, rng)},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(pinned_membership_status(c.set, c.inside), sdp::Status::Optimal) << c.set.name();
    EXPECT_EQ(pinned_membership_status(c.set, c.outside), sdp::Status::Infeasible) << c.set.name();
  }
}

TEST(FreeSetsCompile, OptimizedEffectsAreMembers) {
  auto rng = pf::make_rng(301);
  for (const auto& f : {FreeSetSpec::incoherent(), FreeSetSpec::trivial(), FreeSetSpec::ppt_single_cuts({2, 2})}) {
    sdp::Problem p;
    std::vector<sdp::HermitianVar> vars;
    std::vector<sdp::MatExpr> effects;
    sdp::LinExpr obj;
    for (int i = 0; i < 3; ++i) {
      vars.push_back(p.add_hermitian(4));
      effects.push_back(vars.back().expr());
      obj += effects.back().inner(pf::testing::random_hermitian(4, rng));
    }
    pf::compile_membership_constraints(f, p, effects, 1.0);
    p.set_objective(obj);
    auto sol = sdp::solve(p);
    ASSERT_EQ(sol.status, sdp::Status::Optimal) << f.name() << ": " << sol.message;
    std::vector<HermitianOperator> found;
    for (const auto& v : vars) found.push_back(sol.value(v));
    auto m = pf::validate_povm(found, {1e-7, 1e-7});
    EXPECT_TRUE(pf::is_member(f, m, 1e-7).member) << f.name();
  }
}

TEST(FreeSetsDual, TrivialGivesTopEigenvalueSum) {
  auto rng = pf::make_rng(500);
  for (int trial = 0; trial < 5; ++trial) {
    auto m = pf::random_povm(2, 2, rng);
    sdp::Problem p;
    std::vector<sdp::MatExpr> z;
    sdp::LinExpr obj = -1.0;
    for (std::size_t i = 0; i < 2; ++i) {
      z.push_back(p.add_psd_variable(2).expr());
      obj += z.back().inner(m[i]);
    }
    auto form = pf::dual_constraint_form(FreeSetSpec::trivial(), p, z);
    EXPECT_TRUE(form.supported);
    EXPECT_EQ(form.constraints, 2u);
    p.set_objective(-1.0 * obj);
    auto sol = sdp::solve(p);
    ASSERT_EQ(sol.status, sdp::Status::Optimal);
    const double oracle = pf::max_eigenvalue(m[0]) + pf::max_eigenvalue(m[1]) - 1.0;
    EXPECT_NEAR(-sol.primal_value, oracle, 1e-7);
  }
}

TEST(FreeSetsDual, IncoherentQubitFourierValue) {
  auto m = pf::fourier_povm(2);
  sdp::Problem p;
  std::vector<sdp::MatExpr> z;
  sdp::LinExpr obj = -1.0;
  for (std::size_t i = 0; i < 2; ++i) {
    z.push_back(p.add_psd_variable(2).expr());
    obj += z.back().inner(m[i]);
  }
  auto form = pf::dual_constraint_form(FreeSetSpec::incoherent(), p, z);
  EXPECT_EQ(form.constraints, 3u);
  p.set_objective(-1.0 * obj);
  auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  EXPECT_NEAR(-sol.primal_value, 1.0, 1e-7);
}

TEST(FreeSetsDual, RelabelingHullAndPptForms) {
  // All deterministic relabelings j -> a of the qubit computational measurement.
  std::vector<pf::Povm> gens;
  for (std::size_t f0 = 0; f0 < 2; ++f0) {
    for (std::size_t f1 = 0; f1 < 2; ++f1) {
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2, 2);
      q(static_cast<Eigen::Index>(f0), 0) = 1.0;
      q(static_cast<Eigen::Index>(f1), 1) = 1.0;
      gens.push_back(pf::post_process(pf::computational_basis_povm(2), pf::StochasticMatrix::validated(q)));
    }
  }
  sdp::Problem p;
  std::vector<sdp::MatExpr> z{p.add_psd_variable(2).expr(), p.add_psd_variable(2).expr()};
  auto form = pf::dual_constraint_form(FreeSetSpec::hull(gens), p, z);
  EXPECT_TRUE(form.supported);
  EXPECT_EQ(form.constraints, 4u);

  sdp::Problem q;
  std::vector<sdp::MatExpr> w{q.add_psd_variable(4).expr(), q.add_psd_variable(4).expr()};
  auto ppt = pf::dual_constraint_form(FreeSetSpec::ppt_single_cuts({2, 2}), q, w);
  EXPECT_FALSE(ppt.supported);
  EXPECT_FALSE(ppt.reason.empty());
}

TEST(FreeSetsProperty, IncoherentClosedUnderFreeMaps) {
  auto rng = pf::make_rng(600);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    auto m = pf::random_incoherent_povm(d, 3, rng);
    auto processed = pf::post_process(m, pf::StochasticMatrix::random(4, 3, rng));
    EXPECT_TRUE(pf::is_member(FreeSetSpec::incoherent(), processed).member);
    ComplexMatrix phases = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    for (Eigen::Index k = 0; k < phases.rows(); ++k) phases(k, k) = std::polar(1.0, angle(rng));
    EXPECT_TRUE(pf::is_member(FreeSetSpec::incoherent(), pf::unitary_conjugate(m, phases)).member);
  }
}

TEST(FreeSetsProperty, PptClosedUnderDepolarization) {
  auto rng = pf::make_rng(601);
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {2, 3}, {3, 2}};
  for (const auto& dims : shapes) {
    auto f = FreeSetSpec::ppt_single_cuts(dims);
    for (int trial = 0; trial < 5; ++trial) {
      auto m = random_separable_povm(dims[0], dims[1], 3, rng);
      ASSERT_TRUE(pf::is_member(f, m).member);
      for (double t : {0.0, 0.3, 0.7, 1.0}) EXPECT_TRUE(pf::is_member(f, pf::depolarize(m, t)).member);
    }
  }
}

TEST(FreeSetsProperty, PptMatchesConcurrenceOnTwoQubits) {
  auto rng = pf::make_rng(602);
  std::vector<HermitianOperator> corpus;
  pf::ComplexVector phi = pf::bell_ket(2, 0, 0);
  // Werner family away from the threshold p = 1/3.
  for (double p : {0.0, 0.2, 0.3, 0.36, 0.5, 0.9}) {
    corpus.push_back(p * HermitianOperator::projector(phi) + (1.0 - p) / 4.0 * HermitianOperator::identity(4));
  }
  // Mixtures of random product states.
  for (int k = 0; k < 5; ++k) {
    HermitianOperator s = HermitianOperator::zero(4);
    for (int j = 0; j < 3; ++j) s += pf::kron(pf::random_density(2, 1, rng), pf::random_density(2, 1, rng));
    corpus.push_back((1.0 / 3.0) * s);
  }
  // Random pure and mixed states.
  for (int k = 0; k < 4; ++k) corpus.push_back(pf::random_density(4, 1, rng));
  for (int k = 0; k < 5; ++k) corpus.push_back(pf::random_density(4, 4, rng));
  ASSERT_EQ(corpus.size(), 20u);
  int separable = 0;
  for (const auto& rho : corpus) {
    const bool sep = concurrence(rho) <= 1e-9;
    separable += sep;
    const double lmin = pf::min_eigenvalue(pf::partial_transpose(rho, std::vector<std::size_t>{2, 2},
                                                                 std::vector<std::size_t>{0}));
    EXPECT_EQ(lmin >= -1e-9, sep);
  }
  EXPECT_GE(separable, 5);
  EXPECT_LE(separable, 15);
}

TEST(FreeSetsJson, RoundTrip) {
  auto rng = pf::make_rng(9);
  std::vector<FreeSetSpec> sets{FreeSetSpec::incoherent(), FreeSetSpec::trivial(),
                                FreeSetSpec::ppt({2, 3, 2}, {{0}, {1, 2}}),
                                FreeSetSpec::hull({pf::random_povm(2, 2, rng)})};
  for (const auto& f : sets) {
    auto back = pf::free_set_from_json(pf::free_set_to_json(f));
    EXPECT_EQ(back.name(), f.name());
    EXPECT_EQ(pf::free_set_to_json(back).dump(), pf::free_set_to_json(f).dump());
  }
  auto defaulted = pf::free_set_from_json(pf::Json{{"variant", "ppt"}, {"dims", {2, 2, 2}}});
  EXPECT_EQ(defaulted.name(), "ppt(2x2x2;0|1|2)");
  EXPECT_THROW(pf::free_set_from_json(pf::Json{{"variant", "sep"}}), pf::ParseError);
  EXPECT_THROW(pf::free_set_from_json(pf::Json{{"variant", "ppt"}}), pf::ParseError);
}
