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

// povm-forge: robustness certificates, restricted discrimination and the
// seeded experiments, from the command line.
//
// Exit codes: 0 success, 2 a checked property failed, 3 solver failure,
// 4 bad input (unreadable file, malformed JSON, invalid POVM or arguments).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "povmforge/discrimination.hpp"
#include "povmforge/errors.hpp"
#include "povmforge/experiments.hpp"
#include "povmforge/povm_json.hpp"
#include "povmforge/robustness.hpp"

namespace pf = povmforge;

namespace {

constexpr int kExitCheckFailed = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInput = 4;

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("povm-forge");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("POVM_FORGE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept the spelled-out ones.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("POVM_FORGE_LOG='{}' not recognized, using info", env);
    }
  }
}

pf::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return pf::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pf::ParseError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
  spdlog::info("wrote {}", path);
}

pf::ValidationReport validate_file(const std::string& path, const pf::Json& j) {
  try {
    return pf::validate_json(j);
  } catch (const pf::ParseError& e) {
    throw pf::ParseError(path + ": " + e.what());
  }
}

// Loads a POVM, listing every violation before giving up.
pf::Povm load_povm(const std::string& path) {
  const pf::Json j = read_json(path);
  const auto report = validate_file(path, j);
  if (report.kind != "povm") throw InputError(path + ": expected a POVM file, found an ensemble");
  if (!report.ok()) {
    for (const auto& p : report.problems) spdlog::error("{}: {}", path, p);
    throw InputError(path + ": invalid POVM");
  }
  return pf::povm_from_json(j);
}

pf::Ensemble load_ensemble(const std::string& path) {
  const pf::Json j = read_json(path);
  const auto report = validate_file(path, j);
  if (report.kind != "ensemble") throw InputError(path + ": expected an ensemble file, found a POVM");
  if (!report.ok()) {
    for (const auto& p : report.problems) spdlog::error("{}: {}", path, p);
    throw InputError(path + ": invalid ensemble");
  }
  return pf::ensemble_from_json(j);
}

pf::sdp::Options solver_options(double tol) {
  pf::sdp::Options o;
  o.gap_tol = tol;
  o.feas_tol = tol;
  o.monitor = [](const pf::sdp::IterationInfo& it) {
    spdlog::trace("iter {:3d}  pcost {: .10e}  dcost {: .10e}  pres {:.2e}  dres {:.2e}  step {:.3f}", it.iteration,
                  it.primal_cost, it.dual_cost, it.primal_residual, it.dual_residual, it.step);
  };
  return o;
}

std::string dump(const pf::Json& j) { return j.dump(2) + "\n"; }

struct Common {
  std::string free_set;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

int run_validate(const std::string& path) {
  const auto report = validate_file(path, read_json(path));
  std::ostringstream msg;
  msg << path << ": " << report.kind << ", dim " << report.dim << ", " << report.count
      << (report.kind == "povm" ? " effects" : " states") << '\n';
  if (report.ok()) {
    msg << "OK\n";
  } else {
    for (const auto& p : report.problems) msg << "  " << p << '\n';
    msg << report.problems.size() << " problem(s)\n";
  }
  std::cout << msg.str();
  return report.ok() ? 0 : kExitCheckFailed;
}

int run_robustness(const std::string& path, const Common& c) {
  if (c.free_set.empty()) throw InputError("--free-set is required");
  const pf::Povm m = load_povm(path);
  const pf::FreeSetSpec f = pf::parse_free_set_arg(c.free_set);
  pf::RobustnessOptions ro;
  ro.solver = solver_options(c.tol);
  const auto cert = pf::robustness_primal(m, f, ro);
  pf::VerifyOptions vo;
  vo.seed = c.seed;
  vo.solver = solver_options(c.tol);
  const auto check = pf::verify_certificate(m, f, cert, vo);
  pf::Json j = pf::certificate_to_json(cert);
  j["verification"] = pf::certificate_check_to_json(check);
  write_output(c.out, dump(j));
  spdlog::info("robustness {:.10g} ({}), gap {:.2e}", cert.value, pf::to_string(cert.exactness), cert.duality_gap);
  if (!check.passes) {
    for (const auto& why : check.failures) spdlog::error("certificate check: {}", why);
    throw CheckFailed("certificate failed verification");
  }
  return 0;
}

int run_discriminate(const std::string& path, const Common& c) {
  const pf::Ensemble e = load_ensemble(path);
  const auto opts = solver_options(c.tol);
  pf::DiscriminationResult r;
  if (c.free_set.empty()) {
    r = pf::optimal_psucc(e, opts);
  } else {
    r = pf::max_psucc_over_free(e, pf::parse_free_set_arg(c.free_set), opts);
  }
  const pf::Povm pgm = pf::pretty_good_measurement(e);
  pf::Json j{{"value", r.value},
             {"exactness", pf::to_string(r.exactness)},
             {"restricted_to", r.restricted_to ? pf::free_set_to_json(*r.restricted_to) : pf::Json(nullptr)},
             {"optimizer", r.optimizer ? pf::povm_to_json(*r.optimizer) : pf::Json(nullptr)},
             {"pgm_value", pf::psucc(e, pgm)},
             {"diagnostics", r.diagnostics ? pf::solve_summary_to_json(*r.diagnostics) : pf::Json(nullptr)}};
  write_output(c.out, dump(j));
  spdlog::info("success probability {:.10g} ({})", r.value, pf::to_string(r.exactness));
  return 0;
}

int run_incoherent_sweep(std::size_t dmax, std::size_t nmax, const Common& c) {
  const auto rows = pf::incoherent_sweep(2, dmax, 2, nmax, c.jobs);
  write_output(c.out, pf::sweep_to_csv(rows));
  std::size_t bad = 0;
  for (const auto& r : rows) {
    if (!(r.abs_error <= 1e-5)) {
      ++bad;
      spdlog::error("d={} n={}: computed {} predicted {} ({})", r.d, r.n, r.computed, r.predicted, r.status);
    }
  }
  if (bad > 0) throw CheckFailed(std::to_string(bad) + " sweep cell(s) off the predicted value");
  return 0;
}

int run_bipartite(std::size_t dA, std::size_t dB, std::size_t trials, const Common& c) {
  pf::BipartiteOptions bo;
  bo.trials = trials;
  bo.jobs = c.jobs;
  const auto rec = pf::bipartite_sep(dA, dB, c.seed, bo);
  write_output(c.out, dump(pf::bipartite_to_json(rec)));
  if (!rec.passed()) {
    for (const auto& why : rec.failures) spdlog::error("{}", why);
    throw CheckFailed("bipartite record failed its checks");
  }
  return 0;
}

int run_haar(std::size_t qubits, std::size_t trials, const Common& c) {
  const auto report = pf::multiqubit_haar(qubits, trials, c.seed, c.jobs);
  write_output(c.out, pf::haar_to_csv(report));
  const auto& s = report.summary;
  spdlog::info("mean PGM success {:.4f}, mean advantage ratio {:.4f}", s.mean_pgm, s.mean_ratio);
  std::size_t bad = s.failed_trials;
  for (const auto& t : report.trials) {
    if (t.status != "ok") {
      spdlog::error("trial {}: {}", t.trial, t.status);
    } else if (t.psucc_ppt > t.psucc_optimal + 1e-9 || t.psucc_pgm > t.psucc_optimal + 1e-9) {
      ++bad;
      spdlog::error("trial {}: optimal {} below restricted {} or PGM {}", t.trial, t.psucc_optimal, t.psucc_ppt,
                    t.psucc_pgm);
    }
  }
  if (bad > 0) throw CheckFailed(std::to_string(bad) + " trial(s) failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Measurement robustness and restricted state discrimination"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* cmd, bool free_set, bool tol, bool seed, bool jobs) {
    if (free_set) {
      cmd->add_option("--free-set", common.free_set,
                      "incoherent | trivial | ppt:AxB[xC...] | JSON object | @file.json");
    }
    if (tol) cmd->add_option("--tol", common.tol, "solver gap and feasibility tolerance")->check(CLI::PositiveNumber);
    if (seed) cmd->add_option("--seed", common.seed, "random seed");
    if (jobs) cmd->add_option("--jobs", common.jobs, "worker threads")->check(CLI::Range(1, 256));
    cmd->add_option("--out", common.out, "output file (default: stdout)");
  };

  std::string file;

  auto* validate = app.add_subcommand("validate", "check a POVM or ensemble JSON file");
  validate->add_option("file", file, "JSON file")->required();

  auto* robustness = app.add_subcommand("robustness", "robustness certificate of a POVM");
  robustness->add_option("file", file, "POVM JSON file")->required();
  add_common(robustness, true, true, true, false);

  auto* discriminate = app.add_subcommand("discriminate", "best success probability for an ensemble");
  discriminate->add_option("file", file, "ensemble JSON file")->required();
  add_common(discriminate, true, true, false, false);

  auto* experiment = app.add_subcommand("experiment", "seeded experiments");
  experiment->require_subcommand(1);

  std::size_t dmax = 5, nmax = 6;
  auto* sweep = experiment->add_subcommand("incoherent-sweep", "Fourier robustness against incoherent POVMs");
  sweep->add_option("--dmax", dmax)->check(CLI::Range(2, 12));
  sweep->add_option("--nmax", nmax)->check(CLI::Range(2, 16));
  add_common(sweep, false, false, false, true);

  std::size_t dA = 2, dB = 2, trials = 20;
  auto* bipartite = experiment->add_subcommand("bipartite-sep", "generalized Bell measurement against PPT POVMs");
  bipartite->add_option("--dA", dA)->check(CLI::Range(2, 4));
  bipartite->add_option("--dB", dB)->check(CLI::Range(2, 4));
  bipartite->add_option("--trials", trials, "depolarized random POVMs")->check(CLI::Range(1, 10000));
  add_common(bipartite, false, false, true, true);

  std::size_t qubits = 2, haar_trials = 30;
  auto* haar = experiment->add_subcommand("multiqubit-haar", "Haar ensembles of N qubits: optimal vs PPT vs PGM");
  haar->add_option("--N", qubits, "number of qubits")->check(CLI::Range(2, 4));
  haar->add_option("--trials", haar_trials)->check(CLI::Range(1, 100000));
  add_common(haar, false, false, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (validate->parsed()) {
      rc = run_validate(file);
    } else if (robustness->parsed()) {
      rc = run_robustness(file, common);
    } else if (discriminate->parsed()) {
      rc = run_discriminate(file, common);
    } else if (sweep->parsed()) {
      rc = run_incoherent_sweep(dmax, nmax, common);
    } else if (bipartite->parsed()) {
      rc = run_bipartite(dA, dB, trials, common);
    } else if (haar->parsed()) {
      rc = run_haar(qubits, haar_trials, common);
    }
  } catch (const CheckFailed& e) {
    spdlog::error("{}", e.what());
    rc = kExitCheckFailed;
  } catch (const pf::NumericalError& e) {
    spdlog::error("solver failure: {}", e.what());
    rc = kExitSolver;
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    rc = kExitInput;
  } catch (const pf::ParseError& e) {
    spdlog::error("{}", e.what());
    rc = kExitInput;
  } catch (const pf::Error& e) {
    // Shape and range errors here come from the inputs (wrong dimensions for
    // the free set, unsupported combinations).
    spdlog::error("{}", e.what());
    rc = kExitInput;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("wall time {:.3f} s", seconds);
  return rc;
}
