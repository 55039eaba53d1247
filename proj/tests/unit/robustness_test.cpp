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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "povmforge/errors.hpp"
#include "povmforge/robustness.hpp"
#include "test_util.hpp"

namespace pf = povmforge;
using pf::ComplexVector;
using pf::FreeSetSpec;
using pf::HermitianOperator;

namespace {

double trivial_oracle(const pf::Povm& m) {
  double total = -1.0;
  for (const auto& e : m.effects()) total += pf::max_eigenvalue(e);
  return total;
}

pf::Povm qubit_projective(double p0) {
  ComplexVector a(2);
  a << std::sqrt(p0), std::sqrt(1.0 - p0);
  ComplexVector b(2);
  b << std::sqrt(1.0 - p0), -std::sqrt(p0);
  return pf::validate_povm({HermitianOperator::projector(a), HermitianOperator::projector(b)});
}

}  // namespace

TEST(Robustness, FourierIsMaximallyCoherent) {
  for (std::size_t d = 2; d <= 5; ++d) {
    auto c = pf::robustness_primal(pf::fourier_povm(d), FreeSetSpec::incoherent());
    EXPECT_NEAR(c.value, static_cast<double>(d - 1), 1e-6) << d;
    EXPECT_NEAR(c.dual_value, static_cast<double>(d - 1), 1e-6) << d;
    EXPECT_EQ(c.exactness, pf::Exactness::Exact);
  }
}

TEST(Robustness, ComputationalBasisIsFree) {
  auto c = pf::robustness_primal(pf::computational_basis_povm(3), FreeSetSpec::incoherent());
  EXPECT_LE(c.value, 1e-7);
  // The noise is arbitrary at s = 0 and reported as uniform trivial.
  for (const auto& e : c.noise_povm.effects()) {
    EXPECT_LE((e.matrix() - (1.0 / 3.0) * HermitianOperator::identity(3).matrix()).norm(), 1e-15);
  }
}

TEST(Robustness, TrivialSetMatchesClosedForm) {
  auto rng = pf::make_rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = pf::random_povm(2 + static_cast<std::size_t>(trial % 3), 2 + static_cast<std::size_t>(trial % 2), rng);
    auto c = pf::robustness_primal(m, FreeSetSpec::trivial());
    EXPECT_NEAR(c.value, trivial_oracle(m), 1e-7);
  }
}

TEST(Robustness, MembersHaveNegligibleRobustness) {
  auto rng = pf::make_rng(21);
  std::vector<std::pair<FreeSetSpec, pf::Povm>> members{
      {FreeSetSpec::incoherent(), pf::random_incoherent_povm(3, 4, rng)},
      {FreeSetSpec::trivial(), pf::trivial_povm(3, {0.5, 0.25, 0.25})},
      {FreeSetSpec::ppt_single_cuts({2, 2}), pf::depolarize(pf::bell_measurement(2), 0.3)},
  };
  for (const auto& [f, m] : members) {
    ASSERT_TRUE(pf::is_member(f, m).member);
    EXPECT_LE(pf::robustness_primal(m, f).value, 1e-7) << f.name();
  }
}

TEST(Robustness, QubitRankOneBelowMaximal) {
  auto c = pf::robustness_primal(qubit_projective(0.6), FreeSetSpec::incoherent());
  EXPECT_LT(c.value, 1.0 - 1e-3);
  EXPECT_GT(c.value, 1e-3);
}

TEST(Robustness, InfeasibleHullIsReported) {
  // The computational measurement has no full-rank effects, so M + sN cannot
  // reach it from a coherent M.
  auto f = FreeSetSpec::hull({pf::computational_basis_povm(2)});
  EXPECT_THROW(pf::robustness_primal(pf::fourier_povm(2), f), pf::NumericalError);
}

TEST(RobustnessDual, Examples) {
  auto member = pf::robustness_dual(pf::computational_basis_povm(2), FreeSetSpec::incoherent());
  EXPECT_LE(member.value, 1e-7);

  auto f3 = pf::robustness_dual(pf::fourier_povm(3), FreeSetSpec::incoherent());
  EXPECT_NEAR(f3.value, 2.0, 1e-7);
  for (std::size_t a = 0; a < 3; ++a) {
    auto proj = HermitianOperator::projector(pf::fourier_ket(3, a));
    EXPECT_LE((f3.witness[a].matrix() - proj.matrix()).norm(), 1e-5);
  }

  EXPECT_NEAR(pf::robustness_dual(pf::truncated_fourier_povm(4, 2), FreeSetSpec::incoherent()).value, 1.0, 1e-7);
  EXPECT_THROW(pf::robustness_dual(pf::bell_measurement(2), FreeSetSpec::ppt_single_cuts({2, 2})),
               pf::UnsupportedError);
}

TEST(RobustnessDual, AgreesWithPrimal) {
  auto rng = pf::make_rng(22);
  std::vector<pf::Povm> hull_gens{pf::random_povm(2, 3, rng), pf::random_povm(2, 3, rng),
                                  pf::uniform_trivial_povm(2, 3)};
  for (int trial = 0; trial < 4; ++trial) {
    auto m3 = pf::random_povm(3, 3, rng);
    auto m2 = pf::random_povm(2, 3, rng);
    for (const auto& [f, m] : std::vector<std::pair<FreeSetSpec, pf::Povm>>{
             {FreeSetSpec::incoherent(), m3}, {FreeSetSpec::trivial(), m3}, {FreeSetSpec::hull(hull_gens), m2}}) {
      const double primal = pf::robustness_primal(m, f).value;
      const double dual = pf::robustness_dual(m, f).value;
      EXPECT_NEAR(primal, dual, 1e-6) << f.name();
    }
  }
}

TEST(Extraction, MaximallyMixedWitness) {
  std::vector<HermitianOperator> z(3, 0.5 * HermitianOperator::identity(2));
  auto x = pf::extract_optimal_ensemble(z);
  ASSERT_EQ(x.ensemble.size(), 3u);
  for (const auto& item : x.ensemble.items()) {
    EXPECT_NEAR(item.prob, 1.0 / 3.0, 1e-15);
    EXPECT_LE((item.state.matrix() - 0.5 * HermitianOperator::identity(2).matrix()).norm(), 1e-15);
  }
  EXPECT_NEAR(x.total_trace, 3.0, 1e-15);
}

TEST(Extraction, QubitFourierGivesPlusMinus) {
  auto dual = pf::robustness_dual(pf::fourier_povm(2), FreeSetSpec::incoherent());
  auto x = pf::extract_optimal_ensemble(dual.witness);
  ASSERT_EQ(x.ensemble.size(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_NEAR(x.ensemble[a].prob, 0.5, 1e-6);
    auto target = HermitianOperator::projector(pf::fourier_ket(2, a));
    EXPECT_LE((x.ensemble[a].state.matrix() - target.matrix()).norm(), 1e-5);
  }
}

TEST(Extraction, DropsZeroComponentsAndRecordsThem) {
  std::vector<HermitianOperator> z{HermitianOperator::diagonal({1.0, 0.0}), HermitianOperator::zero(2),
                                   HermitianOperator::diagonal({0.0, 3.0})};
  auto x = pf::extract_optimal_ensemble(z);
  ASSERT_EQ(x.dropped, std::vector<std::size_t>{1});
  EXPECT_EQ(x.outcomes, (std::vector<std::size_t>{0, 2}));
  EXPECT_NEAR(x.ensemble[1].prob, 0.75, 1e-15);
  auto aligned = x.aligned();
  ASSERT_EQ(aligned.size(), 3u);
  EXPECT_EQ(aligned[1].prob, 0.0);
  EXPECT_THROW(pf::extract_optimal_ensemble({HermitianOperator::zero(2)}), pf::RangeError);
  EXPECT_THROW(pf::extract_optimal_ensemble({HermitianOperator::diagonal({1.0, -0.5})}), pf::NotPsdError);
}

TEST(WitnessEnsemble, ShiftRules) {
  auto psd = pf::witness_to_ensemble({HermitianOperator::diagonal({2.0, 1.0}), HermitianOperator::diagonal({0.0, 1.0})});
  EXPECT_NEAR(psd.ensemble[0].prob, 0.75, 1e-15);
  EXPECT_NEAR(psd.ensemble[0].state(0, 0).real(), 2.0 / 3.0, 1e-15);

  auto z = HermitianOperator::diagonal({1.0, -1.0});
  auto pm = pf::witness_to_ensemble({z, -1.0 * z});
  ASSERT_EQ(pm.ensemble.size(), 2u);
  EXPECT_NEAR(pm.ensemble[0].prob, 0.5, 1e-15);
  EXPECT_NEAR(pm.ensemble[0].state(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(pm.ensemble[1].state(1, 1).real(), 1.0, 1e-15);
  EXPECT_THROW(pf::witness_to_ensemble({HermitianOperator::zero(2)}), pf::RangeError);
}

TEST(WitnessEnsemble, SeparatingWitnessGivesStrictAdvantage) {
  for (std::size_t d : {2u, 3u}) {
    auto m = pf::fourier_povm(d);
    auto cert = pf::robustness_primal(m, FreeSetSpec::incoherent());
    auto w = pf::separating_witness(cert);
    // sum_i tr(W_i M_i) = s* > 0 while every free N gives at most 0.
    double at_m = 0.0;
    for (std::size_t i = 0; i < d; ++i) at_m += pf::frob_inner(w[i], m[i]);
    EXPECT_NEAR(at_m, cert.value, 1e-6);
    auto e = pf::witness_to_ensemble(w).aligned();
    EXPECT_GT(pf::psucc(e, m), pf::max_psucc_over_free(e, FreeSetSpec::incoherent()).value + 1e-3);
  }
}

TEST(Certificate, FourierRatioIsDimension) {
  for (std::size_t d : {2u, 3u, 4u}) {
    auto m = pf::fourier_povm(d);
    auto cert = pf::robustness_primal(m, FreeSetSpec::incoherent());
    auto check = pf::verify_certificate(m, FreeSetSpec::incoherent(), cert);
    EXPECT_TRUE(check.passes);
    EXPECT_NEAR(check.ratio, static_cast<double>(d), 1e-5);
  }
}

TEST(Certificate, MemberRatioIsOne) {
  auto m = pf::computational_basis_povm(2);
  auto cert = pf::robustness_primal(m, FreeSetSpec::incoherent());
  auto check = pf::verify_certificate(m, FreeSetSpec::incoherent(), cert);
  EXPECT_TRUE(check.passes);
  EXPECT_NEAR(check.ratio, 1.0, 1e-5);
}

TEST(Certificate, TrivialRatioMatchesClosedForm) {
  auto rng = pf::make_rng(23);
  auto m = pf::random_povm(2, 2, rng);
  auto cert = pf::robustness_primal(m, FreeSetSpec::trivial());
  auto check = pf::verify_certificate(m, FreeSetSpec::trivial(), cert);
  EXPECT_TRUE(check.passes);
  EXPECT_NEAR(check.ratio, 1.0 + trivial_oracle(m), 1e-5);
}

TEST(Certificate, BellMeasurementOverPpt) {
  auto m = pf::bell_measurement(2);
  auto f = FreeSetSpec::ppt_single_cuts({2, 2});
  auto cert = pf::robustness_primal(m, f);
  ASSERT_TRUE(cert.extracted_ensemble.has_value());
  EXPECT_EQ(cert.extracted_ensemble->ensemble.size(), 4u);
  auto check = pf::verify_certificate(m, f, cert);
  EXPECT_TRUE(check.passes);
  for (const auto& why : check.failures) ADD_FAILURE() << why;
}

TEST(Certificate, CorruptedCertificateFails) {
  auto m = pf::fourier_povm(2);
  auto cert = pf::robustness_primal(m, FreeSetSpec::incoherent());
  cert.value = 0.8;
  auto check = pf::verify_certificate(m, FreeSetSpec::incoherent(), cert);
  EXPECT_FALSE(check.passes);
  EXPECT_GT(check.decomposition_error, 1e-3);
  EXPECT_GT(check.ratio_error, 1e-3);
}

TEST(Certificate, JsonRoundTripIsByteIdentical) {
  auto rng = pf::make_rng(24);
  auto m = pf::random_povm(3, 3, rng);
  auto cert = pf::robustness_primal(m, FreeSetSpec::incoherent());
  const std::string first = pf::certificate_to_json(cert).dump(2);
  const auto back = pf::certificate_from_json(pf::Json::parse(first));
  EXPECT_EQ(pf::certificate_to_json(back).dump(2), first);
  EXPECT_THROW(pf::certificate_from_json(pf::Json{{"value", 1.0}}), pf::ParseError);
}

TEST(RobustnessProperty, ConvexityAndMonotonicity) {
  auto rng = pf::make_rng(25);
  const auto f = FreeSetSpec::incoherent();
  for (int trial = 0; trial < 3; ++trial) {
    auto a = pf::random_povm(3, 3, rng);
    auto b = pf::random_povm(3, 3, rng);
    const double ra = pf::robustness_primal(a, f).value;
    const double rb = pf::robustness_primal(b, f).value;
    for (double p : {0.25, 0.5, 0.75}) {
      EXPECT_LE(pf::robustness_primal(pf::convex_combine(p, a, b), f).value, p * ra + (1 - p) * rb + 1e-6);
    }
    auto processed = pf::post_process(a, pf::StochasticMatrix::random(3, 3, rng));
    EXPECT_LE(pf::robustness_primal(processed, f).value, ra + 1e-6);
    EXPECT_LE(pf::robustness_primal(pf::depolarize(a, 0.6), f).value, ra + 1e-6);
  }
}
