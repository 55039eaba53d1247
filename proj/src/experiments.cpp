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

#include "povmforge/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "povmforge/discrimination.hpp"
#include "povmforge/errors.hpp"

namespace povmforge {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

FreeSetSpec parse_free_set_arg(const std::string& arg) {
  if (arg == "incoherent") return FreeSetSpec::incoherent();
  if (arg == "trivial") return FreeSetSpec::trivial();
  if (arg.rfind("ppt:", 0) == 0) {
    std::vector<std::size_t> dims;
    std::stringstream in(arg.substr(4));
    std::string part;
    while (std::getline(in, part, 'x')) {
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        dims.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("free set '" + arg + "': expected local dimensions like ppt:2x3");
      }
    }
    return FreeSetSpec::ppt_single_cuts(std::move(dims));
  }
  Json j;
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream file(arg.substr(1));
    if (!file) throw ParseError("free set: cannot open '" + arg.substr(1) + "'");
    try {
      j = Json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(arg.substr(1) + ": " + e.what());
    }
  } else if (!arg.empty() && arg.front() == '{') {
    try {
      j = Json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("free set: ") + e.what());
    }
  } else {
    throw ParseError("free set '" + arg + "': expected incoherent, trivial, ppt:AxB, a JSON object or @file");
  }
  return free_set_from_json(j);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

ValidationReport validate_json(const Json& j) {
  ValidationReport r;
  constexpr double herm_tol = 1e-12;
  if (j.is_object() && j.contains("effects")) {
    r.kind = "povm";
    const RawPovm raw = raw_povm_from_json(j);
    r.dim = raw.dim;
    r.count = raw.effects.size();
    ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(r.dim), static_cast<Eigen::Index>(r.dim));
    for (std::size_t i = 0; i < raw.effects.size(); ++i) {
      const auto& m = raw.effects[i];
      if (hermiticity_defect(m) > herm_tol) {
        r.problems.push_back("effects[" + std::to_string(i) + "]: not Hermitian (max |M - M^H| = " +
                             fmt(hermiticity_defect(m)) + ")");
      }
      const double lo = min_eigenvalue(HermitianOperator(m));
      if (lo < -kDefaultPsdTol) {
        r.problems.push_back("effects[" + std::to_string(i) + "]: negative eigenvalue " + fmt(lo));
      }
      sum += m;
    }
    const double defect =
        (sum - ComplexMatrix::Identity(static_cast<Eigen::Index>(r.dim), static_cast<Eigen::Index>(r.dim))).norm();
    if (defect > PovmTolerance{}.completeness) {
      r.problems.push_back("effects do not sum to the identity (Frobenius defect " + fmt(defect) + ")");
    }
    return r;
  }
  if (j.is_object() && j.contains("items")) {
    r.kind = "ensemble";
    const RawEnsemble raw = raw_ensemble_from_json(j);
    r.dim = static_cast<std::size_t>(raw.states.front().rows());
    r.count = raw.states.size();
    const EnsembleTolerance tol;
    double total = 0.0;
    for (std::size_t i = 0; i < raw.states.size(); ++i) {
      const std::string where = "items[" + std::to_string(i) + "]";
      if (!std::isfinite(raw.probs[i]) || raw.probs[i] < 0.0) {
        r.problems.push_back(where + ".prob: negative or not finite");
      }
      total += raw.probs[i];
      const auto& s = raw.states[i];
      if (hermiticity_defect(s) > herm_tol) r.problems.push_back(where + ".state: not Hermitian");
      const double tr = s.trace().real();
      if (std::abs(tr - 1.0) > tol.trace) r.problems.push_back(where + ".state: trace " + fmt(tr));
      const double lo = min_eigenvalue(HermitianOperator(s));
      if (lo < -tol.psd) r.problems.push_back(where + ".state: negative eigenvalue " + fmt(lo));
    }
    if (std::abs(total - 1.0) > tol.prob_sum) r.problems.push_back("probabilities sum to " + fmt(total));
    return r;
  }
  throw ParseError("expected a POVM object with 'effects' or an ensemble object with 'items'");
}

// Incoherent sweep ---------------------------------------------------------------

std::vector<SweepRow> incoherent_sweep(std::size_t dmin, std::size_t dmax, std::size_t nmin, std::size_t nmax,
                                       int jobs) {
  if (dmin < 2 || nmin < 2 || dmax < dmin || nmax < nmin) throw RangeError("incoherent_sweep: need 2 <= min <= max");
  std::vector<SweepRow> rows;
  for (std::size_t d = dmin; d <= dmax; ++d) {
    for (std::size_t n = nmin; n <= nmax; ++n) {
      SweepRow row;
      row.d = d;
      row.n = n;
      row.predicted = static_cast<double>(std::min(d, n) - 1);
      rows.push_back(row);
    }
  }
  parallel_for(rows.size(), jobs, [&](std::size_t k) {
    auto& row = rows[k];
    try {
      const Povm m = row.n >= row.d ? pad_outcomes(fourier_povm(row.d), row.n) : truncated_fourier_povm(row.d, row.n);
      const auto cert = robustness_primal(m, FreeSetSpec::incoherent());
      row.computed = cert.value;
      row.abs_error = std::abs(row.computed - row.predicted);
      row.status = sdp::to_string(cert.diagnostics.status);
      row.iterations = cert.diagnostics.iterations;
    } catch (const Error& e) {
      row.computed = std::numeric_limits<double>::quiet_NaN();
      row.abs_error = std::numeric_limits<double>::quiet_NaN();
      row.status = e.what();
    }
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "d,n,computed,predicted,abs_error,status,iterations\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.d << ',' << r.n << ',' << fmt(r.computed) << ',' << fmt(r.predicted) << ',' << fmt(r.abs_error) << ','
        << status << ',' << r.iterations << '\n';
  }
  return out.str();
}

// Bipartite bounds ---------------------------------------------------------------

BipartiteRecord bipartite_sep(std::size_t dA, std::size_t dB, std::uint64_t seed, const BipartiteOptions& opts) {
  BipartiteRecord r;
  r.dA = dA;
  r.dB = dB;
  r.seed = seed;
  const std::size_t D = std::min(dA, dB);
  const auto f = FreeSetSpec::ppt_single_cuts({dA, dB});
  r.exactness = to_string(f.robustness_exactness());
  r.lower_bound = static_cast<double>(D - 1);
  r.upper_bound = static_cast<double>(D);

  const Povm bell = generalized_bell_measurement(dA, dB);
  const auto cert = robustness_primal(bell, f);
  r.robustness = cert.value;
  r.robustness_dual_value = cert.dual_value;
  VerifyOptions vo;
  vo.seed = seed;
  const auto check = verify_certificate(bell, f, cert, vo);
  r.ratio_error = check.ratio_error;
  for (const auto& why : check.failures) r.failures.push_back("certificate: " + why);
  if (r.robustness < r.lower_bound - opts.bound_tol || r.robustness > r.upper_bound + opts.bound_tol) {
    r.failures.push_back("robustness " + fmt(r.robustness) + " outside [" + fmt(r.lower_bound) + ", " +
                         fmt(r.upper_bound) + "]");
  }

  const auto disc = max_psucc_over_free(embedded_bell_states(dA, dB), f);
  r.bell_psucc = disc.value;
  r.bell_expected = 1.0 / static_cast<double>(D);
  r.bell_exactness = to_string(disc.exactness);
  if (std::abs(r.bell_psucc - r.bell_expected) > opts.psucc_tol) {
    r.failures.push_back("Bell-ensemble restricted psucc " + fmt(r.bell_psucc) + " differs from " +
                         fmt(r.bell_expected));
  }

  r.depolarize_t = 1.0 / (1.0 + static_cast<double>(D));
  r.depolarize_trials = opts.trials;
  r.depolarize_outcomes = opts.outcomes;
  const auto& cut = std::get<PptSet>(f.variant()).cuts.front();
  std::vector<double> lows(opts.trials);
  parallel_for(opts.trials, opts.jobs, [&](std::size_t k) {
    auto rng = make_rng(seed, k);
    const Povm m = depolarize(random_povm(dA * dB, opts.outcomes, rng), r.depolarize_t);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& e : m.effects()) {
      lo = std::min(lo, min_eigenvalue(partial_transpose(e, std::vector<std::size_t>{dA, dB}, cut)));
    }
    lows[k] = lo;
  });
  r.depolarize_min_pt_eigenvalue = lows.empty() ? 0.0 : *std::min_element(lows.begin(), lows.end());
  for (std::size_t k = 0; k < lows.size(); ++k) {
    if (lows[k] >= -opts.pt_tol) {
      ++r.depolarize_members;
    } else {
      r.failures.push_back("depolarized random POVM " + std::to_string(k) + " has PT eigenvalue " + fmt(lows[k]));
    }
  }
  return r;
}

Json bipartite_to_json(const BipartiteRecord& r) {
  return Json{{"experiment", "bipartite-sep"},
              {"dA", r.dA},
              {"dB", r.dB},
              {"seed", r.seed},
              {"exactness", r.exactness},
              {"robustness", {{"value", r.robustness},
                              {"lower_bound", r.lower_bound},
                              {"upper_bound", r.upper_bound},
                              {"dual_value", r.robustness_dual_value},
                              {"ratio_error", r.ratio_error}}},
              {"bell_discrimination", {{"value", r.bell_psucc}, {"expected", r.bell_expected},
                                       {"exactness", r.bell_exactness}}},
              {"depolarization", {{"t", r.depolarize_t},
                                  {"trials", r.depolarize_trials},
                                  {"outcomes", r.depolarize_outcomes},
                                  {"members", r.depolarize_members},
                                  {"min_pt_eigenvalue", r.depolarize_min_pt_eigenvalue}}},
              {"failures", r.failures},
              {"passed", r.passed()}};
}

BipartiteRecord bipartite_from_json(const Json& j) {
  try {
    BipartiteRecord r;
    r.dA = j.at("dA").get<std::size_t>();
    r.dB = j.at("dB").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.exactness = j.at("exactness").get<std::string>();
    const Json& rob = j.at("robustness");
    r.robustness = rob.at("value").get<double>();
    r.lower_bound = rob.at("lower_bound").get<double>();
    r.upper_bound = rob.at("upper_bound").get<double>();
    r.robustness_dual_value = rob.at("dual_value").get<double>();
    r.ratio_error = rob.at("ratio_error").get<double>();
    const Json& bell = j.at("bell_discrimination");
    r.bell_psucc = bell.at("value").get<double>();
    r.bell_expected = bell.at("expected").get<double>();
    r.bell_exactness = bell.at("exactness").get<std::string>();
    const Json& dep = j.at("depolarization");
    r.depolarize_t = dep.at("t").get<double>();
    r.depolarize_trials = dep.at("trials").get<std::size_t>();
    r.depolarize_outcomes = dep.at("outcomes").get<std::size_t>();
    r.depolarize_members = dep.at("members").get<std::size_t>();
    r.depolarize_min_pt_eigenvalue = dep.at("min_pt_eigenvalue").get<double>();
    r.failures = j.at("failures").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bipartite record: ") + e.what());
  }
}

// Multiqubit Haar ensembles --------------------------------------------------------

HaarReport multiqubit_haar(std::size_t qubits, std::size_t trials, std::uint64_t seed, int jobs) {
  if (qubits < 2 || qubits > 4) throw RangeError("multiqubit_haar: supported qubit counts are 2 to 4");
  const std::size_t states = std::size_t{1} << qubits;
  const auto f = FreeSetSpec::ppt_single_cuts(std::vector<std::size_t>(qubits, 2));
  HaarReport report;
  report.trials.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t k) {
    HaarTrial& t = report.trials[k];
    t.trial = k;
    t.seed = split_seed(seed, k);
    try {
      const Ensemble e = haar_ensemble(qubits, states, t.seed);
      t.psucc_pgm = psucc(e, pretty_good_measurement(e));
      const auto best = optimal_psucc(e);
      const auto restricted = max_psucc_over_free(e, f);
      t.psucc_optimal = best.value;
      t.psucc_ppt = restricted.value;
      t.ratio = t.psucc_optimal / t.psucc_ppt;
      t.optimal_exactness = to_string(best.exactness);
      t.ppt_exactness = to_string(restricted.exactness);
      t.status = "ok";
    } catch (const Error& err) {
      t.status = err.what();
    }
  });

  HaarSummary& s = report.summary;
  s.qubits = qubits;
  s.trials = trials;
  s.min_ratio = std::numeric_limits<double>::infinity();
  s.max_pgm_excess = -std::numeric_limits<double>::infinity();
  s.max_restricted_excess = -std::numeric_limits<double>::infinity();
  std::size_t ok = 0;
  for (const auto& t : report.trials) {
    if (t.status != "ok") {
      ++s.failed_trials;
      continue;
    }
    ++ok;
    s.mean_pgm += t.psucc_pgm;
    s.mean_optimal += t.psucc_optimal;
    s.mean_ppt += t.psucc_ppt;
    s.mean_ratio += t.ratio;
    s.min_ratio = std::min(s.min_ratio, t.ratio);
    s.max_pgm_excess = std::max(s.max_pgm_excess, t.psucc_pgm - t.psucc_optimal);
    s.max_restricted_excess = std::max(s.max_restricted_excess, t.psucc_ppt - t.psucc_optimal);
  }
  if (ok > 0) {
    const double inv = 1.0 / static_cast<double>(ok);
    s.mean_pgm *= inv;
    s.mean_optimal *= inv;
    s.mean_ppt *= inv;
    s.mean_ratio *= inv;
  }
  return report;
}

std::string haar_to_csv(const HaarReport& report) {
  std::ostringstream out;
  out << "trial,seed,psucc_pgm,psucc_optimal,psucc_ppt,ratio,optimal_exactness,ppt_exactness,status\n";
  for (const auto& t : report.trials) {
    std::string status = t.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << t.trial << ',' << t.seed << ',' << fmt(t.psucc_pgm) << ',' << fmt(t.psucc_optimal) << ','
        << fmt(t.psucc_ppt) << ',' << fmt(t.ratio) << ',' << t.optimal_exactness << ',' << t.ppt_exactness << ','
        << status << '\n';
  }
  const auto& s = report.summary;
  out << "# qubits=" << s.qubits << " trials=" << s.trials << " failed=" << s.failed_trials
      << " mean_pgm=" << fmt(s.mean_pgm) << " mean_optimal=" << fmt(s.mean_optimal) << " mean_ppt=" << fmt(s.mean_ppt)
      << " mean_ratio=" << fmt(s.mean_ratio) << " min_ratio=" << fmt(s.min_ratio)
      << " max_pgm_excess=" << fmt(s.max_pgm_excess) << " max_restricted_excess=" << fmt(s.max_restricted_excess)
      << '\n';
  return out.str();
}

}  // namespace povmforge
