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

#include "povmforge/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "povmforge/errors.hpp"

namespace povmforge {

namespace {

double pairing(const std::vector<HermitianOperator>& z, const Povm& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) total += frob_inner(z[i], m[i]);
  return total;
}

void require_witnesses(const std::vector<HermitianOperator>& w, const char* what) {
  if (w.empty()) throw DimensionError(std::string(what) + ": no witness operators");
  for (const auto& op : w) {
    if (op.dim() != w.front().dim()) throw DimensionError(std::string(what) + ": witnesses differ in dimension");
  }
}

sdp::Solution solve_or_throw(const sdp::Problem& p, const sdp::Options& opts, const char* what) {
  auto sol = sdp::solve(p, opts);
  if (sol.status == sdp::Status::Infeasible) {
    throw NumericalError(std::string(what) +
                         ": solver reported the program infeasible, which a non-empty free set rules out (" +
                         sol.message + ")");
  }
  if (sol.status != sdp::Status::Optimal) {
    throw NumericalError(std::string(what) + ": solver returned " + sdp::to_string(sol.status) + " (" + sol.message +
                         ")");
  }
  return sol;
}

}  // namespace

Ensemble ExtractedEnsemble::aligned() const {
  const std::size_t d = ensemble.dim();
  std::vector<EnsembleItem> items(num_outcomes,
                                  {0.0, (1.0 / static_cast<double>(d)) * HermitianOperator::identity(d)});
  for (std::size_t k = 0; k < outcomes.size(); ++k) items[outcomes[k]] = ensemble[k];
  return validate_ensemble(std::move(items));
}

double max_free_pairing(const FreeSetSpec& f, const std::vector<HermitianOperator>& witnesses,
                        const sdp::Options& opts) {
  require_witnesses(witnesses, "max_free_pairing");
  const std::size_t d = witnesses.front().dim();
  f.check_compatible(d, witnesses.size());
  if (const auto* hull = std::get_if<ConvexHullSet>(&f.variant())) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& g : hull->generators) best = std::max(best, pairing(witnesses, g));
    return best;
  }
  sdp::Problem p;
  std::vector<sdp::MatExpr> effects;
  sdp::LinExpr obj;
  for (const auto& z : witnesses) {
    effects.push_back(p.add_hermitian(d).expr());
    obj -= effects.back().inner(z);
  }
  compile_membership_constraints(f, p, effects, 1.0);
  p.set_objective(obj);
  return -solve_or_throw(p, opts, "max_free_pairing").primal_value;
}

RobustnessCertificate robustness_primal(const Povm& m, const FreeSetSpec& f, const RobustnessOptions& opts) {
  const std::size_t d = m.dim();
  const std::size_t n = m.num_outcomes();
  f.check_compatible(d, n);

  sdp::Problem p;
  const auto t = p.add_scalar();
  std::vector<sdp::HermitianVar> vars;
  std::vector<sdp::MatExpr> effects;
  for (std::size_t i = 0; i < n; ++i) {
    vars.push_back(p.add_hermitian(d));
    effects.push_back(vars.back().expr());
  }
  // Added first, so cone i is the noise constraint of outcome i.
  for (std::size_t i = 0; i < n; ++i) {
    sdp::MatExpr noise = effects[i];
    noise -= m[i];
    p.add_psd(std::move(noise), "noise");
  }
  compile_membership_constraints(f, p, effects, sdp::LinExpr::variable(t));
  p.set_objective(sdp::LinExpr::variable(t) - 1.0);
  const auto sol = solve_or_throw(p, opts.solver, "robustness_primal");

  const double tv = sol.value(t);
  const double raw = tv - 1.0;
  const double s = std::max(0.0, raw);

  std::vector<HermitianOperator> scaled;
  std::vector<HermitianOperator> noise;
  for (std::size_t i = 0; i < n; ++i) {
    const HermitianOperator x = sol.value(vars[i]);
    scaled.push_back((1.0 / tv) * x);
    noise.push_back(x - m[i]);
  }
  Povm free_povm = repair_povm(std::move(scaled));
  Povm noise_povm = uniform_trivial_povm(d, n);
  if (s > opts.zero_value_tol) {
    for (auto& g : noise) g *= 1.0 / s;
    noise_povm = repair_povm(std::move(noise), 1e-5 + 1e-6 / s);
  }

  std::vector<HermitianOperator> z(sol.cone_multipliers.begin(),
                                   sol.cone_multipliers.begin() + static_cast<std::ptrdiff_t>(n));
  const double scale = max_free_pairing(f, z, opts.solver);
  if (scale > 0.0) {
    for (auto& op : z) op *= 1.0 / scale;
  }
  const double dual_value = pairing(z, m) - 1.0;

  RobustnessCertificate cert{
      .value = s,
      .noise_povm = std::move(noise_povm),
      .free_povm = std::move(free_povm),
      .dual_witness = z,
      .dual_value = dual_value,
      .duality_gap = std::abs(raw - dual_value),
      .witness_scale = scale,
      .extracted_ensemble = std::nullopt,
      .free_set = f,
      .exactness = f.robustness_exactness(),
      .diagnostics = sdp::summarize(sol),
  };
  try {
    cert.extracted_ensemble = extract_optimal_ensemble(z, opts.drop_tol);
  } catch (const RangeError&) {
    // Degenerate witness: the certificate still carries the value.
  }
  return cert;
}

DualRobustness robustness_dual(const Povm& m, const FreeSetSpec& f, const sdp::Options& opts) {
  const std::size_t d = m.dim();
  const std::size_t n = m.num_outcomes();
  f.check_compatible(d, n);
  sdp::Problem p;
  std::vector<sdp::HermitianVar> vars;
  std::vector<sdp::MatExpr> z;
  sdp::LinExpr obj(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    vars.push_back(p.add_psd_variable(d, "witness"));
    z.push_back(vars.back().expr());
    obj -= z.back().inner(m[i]);
  }
  const auto form = dual_constraint_form(f, p, z);
  if (!form.supported) throw UnsupportedError("robustness_dual: " + form.reason);
  p.set_objective(obj);
  const auto sol = solve_or_throw(p, opts, "robustness_dual");
  DualRobustness out;
  out.value = -sol.primal_value;
  for (const auto& v : vars) out.witness.push_back(sol.value(v));
  out.diagnostics = sdp::summarize(sol);
  return out;
}

ExtractedEnsemble extract_optimal_ensemble(const std::vector<HermitianOperator>& witnesses, double drop_tol) {
  require_witnesses(witnesses, "extract_optimal_ensemble");
  std::vector<HermitianOperator> clipped;
  std::vector<double> traces;
  double total = 0.0;
  double scale = 0.0;
  for (const auto& w : witnesses) scale = std::max(scale, std::abs(w.trace()));
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    auto eig = eig_herm(witnesses[i]);
    if (eig.values.minCoeff() < -1e-6 * std::max(1.0, scale)) {
      throw NotPsdError("extract_optimal_ensemble: witness " + std::to_string(i) + " has eigenvalue " +
                        std::to_string(eig.values.minCoeff()));
    }
    const Eigen::VectorXd v = eig.values.cwiseMax(0.0);
    clipped.emplace_back(ComplexMatrix(eig.vectors * v.cast<Complex>().asDiagonal() * eig.vectors.adjoint()));
    traces.push_back(v.sum());
    total += traces.back();
  }
  if (!(total > 0.0)) throw RangeError("extract_optimal_ensemble: every witness component is zero");

  std::vector<std::size_t> outcomes;
  std::vector<std::size_t> dropped;
  double kept = 0.0;
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (traces[i] <= drop_tol * total) {
      dropped.push_back(i);
    } else {
      outcomes.push_back(i);
      kept += traces[i];
    }
  }
  std::vector<EnsembleItem> items;
  for (std::size_t i : outcomes) items.push_back({traces[i] / kept, (1.0 / traces[i]) * clipped[i]});
  return ExtractedEnsemble{
      .ensemble = validate_ensemble(std::move(items)),
      .outcomes = std::move(outcomes),
      .dropped = std::move(dropped),
      .total_trace = kept,
      .num_outcomes = witnesses.size(),
  };
}

ExtractedEnsemble witness_to_ensemble(const std::vector<HermitianOperator>& witnesses, double drop_tol) {
  require_witnesses(witnesses, "witness_to_ensemble");
  const std::size_t d = witnesses.front().dim();
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& w : witnesses) lowest = std::min(lowest, min_eigenvalue(w));
  const double shift = std::max(0.0, -lowest);
  std::vector<HermitianOperator> shifted;
  for (const auto& w : witnesses) shifted.push_back(w + shift * HermitianOperator::identity(d));
  return extract_optimal_ensemble(shifted, drop_tol);
}

std::vector<HermitianOperator> separating_witness(const RobustnessCertificate& cert) {
  require_witnesses(cert.dual_witness, "separating_witness");
  const std::size_t d = cert.dual_witness.front().dim();
  std::vector<HermitianOperator> w;
  for (const auto& z : cert.dual_witness) w.push_back(z - (1.0 / static_cast<double>(d)) * HermitianOperator::identity(d));
  return w;
}

CertificateCheck verify_certificate(const Povm& m, const FreeSetSpec& f, const RobustnessCertificate& cert,
                                    const VerifyOptions& opts) {
  CertificateCheck c;
  const double s = cert.value;
  const auto fail = [&](const std::string& what) { c.failures.push_back(what); };

  const auto member = is_member(f, cert.free_povm, opts.membership_tol);
  c.free_povm_member = member.member;
  c.membership_violation = member.violation;
  if (!member.member) fail("free POVM is not in the free set: " + member.detail);

  for (std::size_t i = 0; i < m.num_outcomes(); ++i) {
    const HermitianOperator gap = m[i] + s * cert.noise_povm[i] - (1.0 + s) * cert.free_povm[i];
    c.decomposition_error = std::max(c.decomposition_error, frobenius_norm(gap));
  }
  if (c.decomposition_error > opts.decomposition_tol) fail("M + sN differs from (1 + s)F");

  c.witness_error = std::abs(pairing(cert.dual_witness, m) - 1.0 - s);
  if (c.witness_error > opts.tol) fail("sum_i tr(Z_i M_i) - 1 differs from the value");

  if (cert.extracted_ensemble) {
    const Ensemble e = cert.extracted_ensemble->aligned();
    c.psucc_measurement = psucc(e, m);
    c.psucc_free = max_psucc_over_free(e, f, opts.solver).value;
    c.ratio = c.psucc_measurement / c.psucc_free;
    c.ratio_error = std::abs(c.ratio - (1.0 + s));
    if (c.ratio_error > opts.tol) fail("success-probability ratio at the extracted ensemble differs from 1 + s");
  } else {
    fail("certificate carries no extracted ensemble");
  }

  auto rng = make_rng(opts.seed, 0x5a4d);
  c.worst_sandwich_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < opts.sandwich_trials; ++k) {
    const Ensemble e = random_ensemble(m.dim(), m.num_outcomes(), rng);
    const double margin = (1.0 + s) * max_psucc_over_free(e, f, opts.solver).value - psucc(e, m);
    c.worst_sandwich_margin = std::min(c.worst_sandwich_margin, margin);
    ++c.sandwich_trials;
  }
  if (c.sandwich_trials > 0 && c.worst_sandwich_margin < -opts.sandwich_slack) {
    fail("psucc(E, M) exceeds (1 + s) max_free psucc(E, N) on a random ensemble");
  }
  c.passes = c.failures.empty();
  return c;
}

// JSON ---------------------------------------------------------------------------

namespace {

sdp::Status status_from_string(const std::string& s) {
  for (auto st : {sdp::Status::Optimal, sdp::Status::Infeasible, sdp::Status::Unbounded, sdp::Status::NumericalFailure}) {
    if (s == sdp::to_string(st)) return st;
  }
  throw ParseError("unknown solver status '" + s + "'");
}

Exactness exactness_from_string(const std::string& s) {
  for (auto e : {Exactness::Exact, Exactness::LowerBound, Exactness::UpperBound}) {
    if (s == to_string(e)) return e;
  }
  throw ParseError("unknown exactness flag '" + s + "'");
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("certificate: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("certificate: field '") + key + "': " + e.what());
  }
}

}  // namespace

Json solve_summary_to_json(const sdp::SolveSummary& s) {
  return Json{{"status", sdp::to_string(s.status)},  {"iterations", s.iterations},
              {"primal_value", s.primal_value},       {"dual_value", s.dual_value},
              {"primal_residual", s.primal_residual}, {"dual_residual", s.dual_residual},
              {"message", s.message}};
}

Json certificate_to_json(const RobustnessCertificate& cert) {
  Json witness = Json::array();
  for (const auto& z : cert.dual_witness) witness.push_back(matrix_to_json(z));
  Json ensemble = nullptr;
  if (cert.extracted_ensemble) {
    const auto& x = *cert.extracted_ensemble;
    ensemble = Json{{"ensemble", ensemble_to_json(x.ensemble)},
                    {"outcomes", x.outcomes},
                    {"dropped", x.dropped},
                    {"total_trace", x.total_trace},
                    {"num_outcomes", x.num_outcomes}};
  }
  return Json{{"value", cert.value},
              {"exactness", to_string(cert.exactness)},
              {"free_set", free_set_to_json(cert.free_set)},
              {"noise_povm", povm_to_json(cert.noise_povm)},
              {"free_povm", povm_to_json(cert.free_povm)},
              {"dual_witness", std::move(witness)},
              {"dual_value", cert.dual_value},
              {"duality_gap", cert.duality_gap},
              {"witness_scale", cert.witness_scale},
              {"extracted_ensemble", std::move(ensemble)},
              {"diagnostics", solve_summary_to_json(cert.diagnostics)}};
}

RobustnessCertificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("certificate: expected an object");
  PovmTolerance loose{1e-7, 1e-6};
  std::vector<HermitianOperator> witness;
  const Json& wj = j.contains("dual_witness") ? j["dual_witness"] : Json();
  if (!wj.is_array()) throw ParseError("certificate: 'dual_witness' must be a list");
  for (std::size_t i = 0; i < wj.size(); ++i) {
    witness.emplace_back(matrix_from_json(wj[i], "dual_witness[" + std::to_string(i) + "]"));
  }
  std::optional<ExtractedEnsemble> extracted;
  if (j.contains("extracted_ensemble") && !j["extracted_ensemble"].is_null()) {
    const Json& x = j["extracted_ensemble"];
    extracted = ExtractedEnsemble{
        .ensemble = ensemble_from_json(x.at("ensemble")),
        .outcomes = field<std::vector<std::size_t>>(x, "outcomes"),
        .dropped = field<std::vector<std::size_t>>(x, "dropped"),
        .total_trace = field<double>(x, "total_trace"),
        .num_outcomes = field<std::size_t>(x, "num_outcomes"),
    };
  }
  const Json& dj = j.contains("diagnostics") ? j["diagnostics"] : Json::object();
  sdp::SolveSummary diag{
      .status = status_from_string(field<std::string>(dj, "status")),
      .iterations = field<int>(dj, "iterations"),
      .primal_value = field<double>(dj, "primal_value"),
      .dual_value = field<double>(dj, "dual_value"),
      .primal_residual = field<double>(dj, "primal_residual"),
      .dual_residual = field<double>(dj, "dual_residual"),
      .message = field<std::string>(dj, "message"),
  };
  if (!j.contains("free_set")) throw ParseError("certificate: missing field 'free_set'");
  if (!j.contains("noise_povm") || !j.contains("free_povm")) throw ParseError("certificate: missing POVM fields");
  return RobustnessCertificate{
      .value = field<double>(j, "value"),
      .noise_povm = povm_from_json(j["noise_povm"], loose),
      .free_povm = povm_from_json(j["free_povm"], loose),
      .dual_witness = std::move(witness),
      .dual_value = field<double>(j, "dual_value"),
      .duality_gap = field<double>(j, "duality_gap"),
      .witness_scale = field<double>(j, "witness_scale"),
      .extracted_ensemble = std::move(extracted),
      .free_set = free_set_from_json(j["free_set"]),
      .exactness = exactness_from_string(field<std::string>(j, "exactness")),
      .diagnostics = std::move(diag),
  };
}

Json certificate_check_to_json(const CertificateCheck& c) {
  return Json{{"passes", c.passes},
              {"free_povm_member", c.free_povm_member},
              {"membership_violation", c.membership_violation},
              {"decomposition_error", c.decomposition_error},
              {"witness_error", c.witness_error},
              {"psucc_measurement", c.psucc_measurement},
              {"psucc_free", c.psucc_free},
              {"ratio", c.ratio},
              {"ratio_error", c.ratio_error},
              {"sandwich_trials", c.sandwich_trials},
              {"worst_sandwich_margin", c.worst_sandwich_margin},
              {"failures", c.failures}};
}

}  // namespace povmforge
