// Copyright 2026 The privfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the command line binary: each test spawns the real
// executable (path in PRIVFACT_BIN) and checks exit codes, output files,
// and the documented determinism guarantees.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("PRIVFACT_BIN");
  EXPECT_NE(bin, nullptr) << "PRIVFACT_BIN must point at the binary";
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "privfact_cli_XXXXXX")
            .string();
    ASSERT_NE(mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return dir_ + "/" + name; }
  std::string dir_;
};

TEST_F(CliTest, Gamma2ThresholdsWithinTreeBound) {
  RunResult r = run_cli("gamma2 --workload thresholds:8 --norm inf");
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  const double v = j.at("value").get<double>();
  EXPECT_GT(v, 1.0);
  EXPECT_LE(v, 2.0 * std::sqrt(3.0) + 1e-3);
  EXPECT_LT(j.at("residual").get<double>(), 1e-4);
}

TEST_F(CliTest, Gamma2MissingCsvExitsTwo) {
  RunResult r = run_cli("gamma2 --workload csv:" + path("absent.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("cannot open"), std::string::npos) << r.out;
}

TEST_F(CliTest, Gamma2BoxCoveringAlphaGivesZero) {
  // alpha = 2 covers every entry of a sign matrix, so the zero workload is
  // in the box and the approximate norm collapses to zero.
  RunResult r =
      run_cli("gamma2 --workload parities:3,1 --alpha 2 --norm inf");
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j.at("value").get<double>(), 0.0);
}

TEST_F(CliTest, Gamma2OutFileMatchesStdout) {
  const std::string out = path("g.json");
  RunResult r = run_cli("gamma2 --workload identity:3 --norm f --out " + out);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(out), r.out);
}

TEST_F(CliTest, Gamma2FactorsReproduceValue) {
  const std::string prefix = path("fac");
  RunResult r = run_cli("gamma2 --workload thresholds:4 --factors " + prefix);
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_TRUE(std::filesystem::exists(prefix + "_r.csv"));
  EXPECT_TRUE(std::filesystem::exists(prefix + "_a.csv"));
  EXPECT_GT(j.at("value").get<double>(), 1.0);
}

TEST_F(CliTest, WorkloadGenRoundTripsThroughCsv) {
  const std::string prefix = path("wl");
  RunResult gen =
      run_cli("workload gen --workload parities:3,1 --out " + prefix);
  ASSERT_EQ(gen.code, 0) << gen.out;
  RunResult direct = run_cli("gamma2 --workload parities:3,1 --norm star");
  RunResult via_csv =
      run_cli("gamma2 --workload csv:" + prefix + ".csv --norm star");
  ASSERT_EQ(direct.code, 0) << direct.out;
  ASSERT_EQ(via_csv.code, 0) << via_csv.out;
  const double a = json::parse(direct.out).at("value").get<double>();
  const double b = json::parse(via_csv.out).at("value").get<double>();
  // The CSV stores exact doubles, so the same solve runs twice.
  EXPECT_EQ(a, b);
  json meta = json::parse(slurp(prefix + ".json"));
  EXPECT_EQ(meta.at("rows").get<int>(), 4);
  EXPECT_EQ(meta.at("cols").get<int>(), 8);
}

TEST_F(CliTest, MechRunSameSeedSameBytes) {
  const std::string common =
      "mech run --workload thresholds:4 --mech central_gauss --epsilon 1 "
      "--delta 1e-5 --n 100 --trials 5 --seed 42 --out ";
  ASSERT_EQ(run_cli(common + path("a.csv")).code, 0);
  ASSERT_EQ(run_cli(common + path("b.csv")).code, 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b.csv")));
}

TEST_F(CliTest, MechCentralDeltaZeroExitsTwo) {
  RunResult r = run_cli(
      "mech run --workload thresholds:4 --mech central_gauss --epsilon 1 "
      "--delta 0 --n 100 --trials 5 --seed 42 --out " +
      path("c.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("DeltaZero"), std::string::npos) << r.out;
}

TEST_F(CliTest, MechBinaryTreeNeedsPowerOfTwoThresholds) {
  RunResult bad = run_cli(
      "mech run --workload identity:4 --mech binary_tree --epsilon 1 "
      "--delta 1e-5 --n 100 --trials 2 --seed 1 --out " +
      path("bt.csv"));
  EXPECT_EQ(bad.code, 2);
  RunResult good = run_cli(
      "mech run --workload thresholds:8 --mech binary_tree --epsilon 1 "
      "--delta 1e-5 --n 100 --trials 2 --seed 1 --out " +
      path("bt.csv"));
  EXPECT_EQ(good.code, 0) << good.out;
}

TEST_F(CliTest, MechSeedIsRequired) {
  RunResult r = run_cli(
      "mech run --workload thresholds:4 --mech central_gauss --epsilon 1 "
      "--delta 1e-5 --n 100 --trials 2 --out " +
      path("x.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--seed"), std::string::npos) << r.out;
}

TEST_F(CliTest, ConfigSuppliesDefaultsAndFlagsWin) {
  const std::string cfg = path("cfg.json");
  spit(cfg, R"({"workload": "thresholds:4", "epsilon": 1.0, "delta": 1e-5,
                "n": 50, "trials": 3, "out": ")" +
                path("cfg_run.csv") + R"("})");
  RunResult r =
      run_cli("mech run --config " + cfg + " --seed 5 --epsilon 2");
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(path("cfg_run.csv"));
  ASSERT_FALSE(csv.empty());
  // Row format: workload,k,N,mech,epsilon,... The flag value 2 must beat
  // the config value 1.
  EXPECT_NE(csv.find("thresholds(4),4,4,central_gauss,2,"), std::string::npos)
      << csv;
}

TEST_F(CliTest, LocalProtocolErrorExceedsCentralAtSameBudget) {
  const std::string tail =
      " --epsilon 1 --delta 1e-5 --n 10000 --trials 500 --seed 11 --out ";
  RunResult central = run_cli(
      "mech run --workload thresholds:8 --mech central_gauss" + tail +
      path("central.csv"));
  ASSERT_EQ(central.code, 0) << central.out;
  RunResult local = run_cli(
      "mech run --workload thresholds:8 --mech local_factorization" + tail +
      path("local.csv"));
  ASSERT_EQ(local.code, 0) << local.out;
  const double c = json::parse(central.out).at("mean_linf").get<double>();
  const double l = json::parse(local.out).at("mean_linf").get<double>();
  EXPECT_GT(l, c);
}

TEST_F(CliTest, LowerboundConstructVerifyRoundTrip) {
  RunResult c = run_cli(
      "lowerbound construct --workload thresholds:4 --alpha 0.5 "
      "--epsilon 0.5 --out " +
      path("cert"));
  ASSERT_EQ(c.code, 0) << c.out;
  RunResult v = run_cli("lowerbound verify --cert " + path("cert.json"));
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("certificate verifies"), std::string::npos) << v.out;
}

TEST_F(CliTest, LowerboundVerifyNamesTamperedCriterion) {
  RunResult c = run_cli(
      "lowerbound construct --workload thresholds:4 --alpha 0.5 "
      "--epsilon 0.5 --out " +
      path("cert"));
  ASSERT_EQ(c.code, 0) << c.out;
  json j = json::parse(slurp(path("cert.json")));
  j["alpha_prime"] = j["alpha_prime"].get<double>() * 2.0;
  spit(path("cert.json"), j.dump(2) + "\n");
  RunResult v = run_cli("lowerbound verify --cert " + path("cert.json"));
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("alpha_prime consistency"), std::string::npos)
      << v.out;
}

TEST_F(CliTest, LowerboundVerifyCatchesRescaledWitness) {
  RunResult c = run_cli(
      "lowerbound construct --workload thresholds:4 --alpha 0.5 "
      "--epsilon 0.5 --out " +
      path("cert"));
  ASSERT_EQ(c.code, 0) << c.out;
  json j = json::parse(slurp(path("cert.json")));
  j["witness_gamma2_star"] = j["witness_gamma2_star"].get<double>() * 1.5;
  spit(path("cert.json"), j.dump(2) + "\n");
  RunResult v = run_cli("lowerbound verify --cert " + path("cert.json"));
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("witness gamma2_star consistency"), std::string::npos)
      << v.out;
}

TEST_F(CliTest, LowerboundSampleBoundIdentityHolds) {
  RunResult c = run_cli(
      "lowerbound construct --workload parities:4,2 --alpha 0.5 "
      "--epsilon 0.2 --out " +
      path("pcert"));
  ASSERT_EQ(c.code, 0) << c.out;
  json j = json::parse(slurp(path("pcert.json")));
  const double n_lower = j.at("n_lower").get<double>();
  const double m_norm = j.at("m_norm").get<double>();
  const double kl = j.at("kl_threshold").get<double>();
  const double eps = j.at("epsilon").get<double>();
  const double e = std::exp(eps);
  EXPECT_GT(n_lower, 0.0);
  EXPECT_NEAR(n_lower * e * (e - 1.0) * (e - 1.0) * m_norm * m_norm, kl,
              1e-9);
  RunResult v = run_cli("lowerbound verify --cert " + path("pcert.json"));
  EXPECT_EQ(v.code, 0) << v.out;
}

TEST_F(CliTest, ScSearchNoiselessNeedsOneUser) {
  RunResult r = run_cli(
      "sc-search --workload identity:4 --mech central_gauss --alpha 0.01 "
      "--epsilon 1 --delta 1e-5 --trials 3 --seed 7 --noiseless");
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j.at("n_star").get<long>(), 1);
  EXPECT_EQ(j.at("err_at_n_star").get<double>(), 0.0);
  EXPECT_TRUE(j.at("err_below").is_null());
}

TEST_F(CliTest, ScSearchImpossibleTargetExitsThree) {
  RunResult r = run_cli(
      "sc-search --workload identity:4 --mech central_gauss --alpha 0 "
      "--epsilon 1 --delta 1e-5 --trials 2 --seed 7");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("SearchExhausted"), std::string::npos) << r.out;
}

TEST_F(CliTest, ScSearchScalesInverselyWithAlpha) {
  auto n_star = [&](const char* alpha) {
    RunResult r = run_cli(std::string("sc-search --workload identity:4 "
                                      "--mech central_gauss --alpha ") +
                          alpha +
                          " --epsilon 1 --delta 1e-5 --trials 50 --seed 3");
    EXPECT_EQ(r.code, 0) << r.out;
    return json::parse(r.out).at("n_star").get<double>();
  };
  const double at_alpha = n_star("0.1");
  const double at_half = n_star("0.05");
  // Gaussian noise scales as 1/n, so halving the target roughly doubles n.
  EXPECT_GE(at_half / at_alpha, 1.5);
  EXPECT_LE(at_half / at_alpha, 3.0);
}

TEST_F(CliTest, SweepRerunsAreByteIdentical) {
  auto config = [&](const std::string& out_dir) {
    json cfg;
    cfg["workload"] = "thresholds:4";
    cfg["mech"] = "central_gauss";
    cfg["epsilon_grid"] = {0.5, 1.0};
    cfg["n_grid"] = {100, 1000};
    cfg["delta"] = 1e-5;
    cfg["trials"] = 5;
    cfg["seed"] = 99;
    cfg["out_dir"] = out_dir;
    return cfg.dump();
  };
  spit(path("s1.json"), config(path("sw1")));
  spit(path("s2.json"), config(path("sw2")));
  ASSERT_EQ(run_cli("experiment sweep --config " + path("s1.json")).code, 0);
  ASSERT_EQ(run_cli("experiment sweep --config " + path("s2.json")).code, 0);
  const std::string a = slurp(path("sw1") + "/sweep.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("sw2") + "/sweep.csv"));
  for (int i = 0; i < 4; ++i)
    EXPECT_TRUE(std::filesystem::exists(path("sw1") + "/point_" +
                                        std::to_string(i) + ".csv"));
}

TEST_F(CliTest, SweepRejectsEmptyGrid) {
  json cfg;
  cfg["workload"] = "thresholds:4";
  cfg["mech"] = "central_gauss";
  cfg["epsilon_grid"] = json::array();
  cfg["n_grid"] = {100};
  cfg["trials"] = 5;
  cfg["seed"] = 99;
  cfg["out_dir"] = path("sw_empty");
  spit(path("bad.json"), cfg.dump());
  RunResult r = run_cli("experiment sweep --config " + path("bad.json"));
  EXPECT_EQ(r.code, 2);
}

}  // namespace
