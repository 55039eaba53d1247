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

// Runs the povm-forge binary and checks outputs and exit codes.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "povmforge/povm_json.hpp"
#include "povmforge/random.hpp"
#include "povmforge/robustness.hpp"

namespace fs = std::filesystem;
namespace pf = povmforge;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("povm_forge_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  CliResult run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd = std::string("'") + POVM_FORGE_BIN + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

// sum_i lambda_max(M_i) - 1, computed straight from the file contents.
double trivial_robustness_from_file(const pf::Json& j) {
  double total = -1.0;
  for (const auto& effect : j.at("effects")) {
    const auto m = pf::matrix_from_json(effect, "effect");
    Eigen::SelfAdjointEigenSolver<pf::ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    total += es.eigenvalues().maxCoeff();
  }
  return total;
}

}  // namespace

TEST_F(CliTest, ValidateAcceptsGoodFile) {
  write("f.json", pf::povm_to_json(pf::fourier_povm(3)).dump());
  const auto r = run("validate " + path("f.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("OK"), std::string::npos);
}

TEST_F(CliTest, ValidateFlagsNegativeEffect) {
  pf::Json j = pf::povm_to_json(pf::computational_basis_povm(2));
  j["effects"][1][0][0] = -0.25;
  j["effects"][0][0][0] = 1.25;
  write("bad.json", j.dump());
  const auto r = run("validate " + path("bad.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("effects[1]: negative eigenvalue -0.25"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("effects[0]"), std::string::npos) << r.out;
}

TEST_F(CliTest, TruncatedJsonIsAnInputError) {
  write("t.json", "{\"dim\": 2, \"effects\": [[[1, 0]");
  const auto r = run("validate " + path("t.json"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingFileIsAnInputError) {
  EXPECT_EQ(run("validate " + path("absent.json")).code, 4);
  EXPECT_EQ(run("robustness").code, 4);
}

TEST_F(CliTest, RobustnessOfFourierAgainstIncoherent) {
  write("f.json", pf::povm_to_json(pf::fourier_povm(4)).dump());
  const auto r = run("robustness " + path("f.json") + " --free-set incoherent --out " + path("cert.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = pf::Json::parse(slurp(path("cert.json")));
  EXPECT_NEAR(j.at("value").get<double>(), 3.0, 1e-5);
  EXPECT_TRUE(j.at("verification").at("passes").get<bool>());
  EXPECT_EQ(j.at("exactness"), "exact");
}

TEST_F(CliTest, RobustnessOfComputationalBasisIsZero) {
  write("c.json", pf::povm_to_json(pf::computational_basis_povm(3)).dump());
  const auto r = run("robustness " + path("c.json") + " --free-set incoherent");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(pf::Json::parse(r.out).at("value").get<double>(), 0.0, 1e-6);
}

TEST_F(CliTest, RobustnessAgainstTrivialMatchesClosedForm) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto rng = pf::make_rng(seed);
    const pf::Json povm = pf::povm_to_json(pf::random_povm(3, 4, rng));
    write("m.json", povm.dump());
    const auto r = run("robustness " + path("m.json") + " --free-set trivial");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(pf::Json::parse(r.out).at("value").get<double>(), trivial_robustness_from_file(povm), 1e-6);
  }
}

TEST_F(CliTest, CertificateFileRoundTrips) {
  write("f.json", pf::povm_to_json(pf::fourier_povm(3)).dump());
  const auto r = run("robustness " + path("f.json") + " --free-set incoherent");
  ASSERT_EQ(r.code, 0) << r.err;
  pf::Json j = pf::Json::parse(r.out);
  j.erase("verification");
  EXPECT_EQ(pf::certificate_to_json(pf::certificate_from_json(j)).dump(), j.dump());
}

TEST_F(CliTest, SolverFailureExitCode) {
  write("f.json", pf::povm_to_json(pf::fourier_povm(4)).dump());
  const auto r = run("robustness " + path("f.json") + " --free-set incoherent --tol 1e-30");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("numerical-failure"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadFreeSetIsAnInputError) {
  write("f.json", pf::povm_to_json(pf::fourier_povm(4)).dump());
  EXPECT_EQ(run("robustness " + path("f.json") + " --free-set coherent").code, 4);
  EXPECT_EQ(run("robustness " + path("f.json") + " --free-set ppt:2x3").code, 4);
}

TEST_F(CliTest, DiscriminateBellStatesOverPpt) {
  write("e.json", pf::ensemble_to_json(pf::bell_states(2)).dump());
  auto r = run("discriminate " + path("e.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(pf::Json::parse(r.out).at("value").get<double>(), 1.0, 1e-6);
  r = run("discriminate " + path("e.json") + " --free-set ppt:2x2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = pf::Json::parse(r.out);
  EXPECT_NEAR(j.at("value").get<double>(), 0.5, 1e-6);
  EXPECT_EQ(j.at("exactness"), "exact");
}

TEST_F(CliTest, SweepWritesCsv) {
  const auto r = run("experiment incoherent-sweep --dmax 3 --nmax 3 --jobs 2 --out " + path("s.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.rfind("d,n,computed,predicted,abs_error", 0), 0u);
  EXPECT_NE(csv.find("\n3,3,"), std::string::npos);
  EXPECT_NE(r.err.find("wall time"), std::string::npos);
  EXPECT_EQ(csv.find("wall"), std::string::npos);
}

TEST_F(CliTest, BipartiteRecord) {
  const auto r = run("experiment bipartite-sep --dA 2 --dB 2 --trials 4 --seed 5");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = pf::Json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_NEAR(j.at("bell_discrimination").at("value").get<double>(), 0.5, 1e-6);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::string cmd = "experiment multiqubit-haar --N 2 --trials 4";
  const auto a = run(cmd + " --seed 9 --jobs 1");
  const auto b = run(cmd + " --seed 9 --jobs 3");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = run(cmd + " --seed 10");
  EXPECT_NE(a.out, c.out);
}
