// Copyright 2026 The cvmaxcut Authors
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


#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "cvmaxcut/experiment.hpp"

using namespace cvmaxcut;
namespace fs = std::filesystem;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

#ifndef CVMAXCUT_CLI_PATH
#define CVMAXCUT_CLI_PATH "cvmaxcut"
#endif
#ifndef CVMAXCUT_DATA_DIR
#define CVMAXCUT_DATA_DIR "data"
#endif

std::string data(const std::string& file) { return env_or("CVMAXCUT_DATA", CVMAXCUT_DATA_DIR) + "/" + file; }

struct RunResult {
  int status = -1;
  std::string out;
};

/// Runs the CLI with stderr folded into the captured output.
RunResult run_cli(const std::string& args) {
  const std::string cmd = env_or("CVMAXCUT_CLI", CVMAXCUT_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("cvmaxcut_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& s) const { return (path_ / s).string(); }

 private:
  fs::path path_;
};

json tail_json(const std::string& out) {
  const auto start = out.find('{');
  return json::parse(out.substr(start));
}

}  // namespace

TEST(Config, Defaults) {
  const ExperimentConfig c;
  EXPECT_EQ(c.ng_kind, NonGaussianKind::None);
  EXPECT_TRUE(c.use_embedding);
  EXPECT_EQ(c.n_layers, 1u);
  EXPECT_EQ(c.cutoff, 9u);
  EXPECT_EQ(c.learning_rate, 0.25);
  EXPECT_EQ(c.reg_strength, 1e-3);
  EXPECT_EQ(c.steps, 150u);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.fd_step, 1e-4);
}

TEST(Config, ParsesEveryKey) {
  const auto c = load_config(data("star4_config.json"));
  EXPECT_EQ(c.ng_kind, NonGaussianKind::Kerr);
  EXPECT_EQ(fs::path(c.graph).filename(), "star4.json");
  EXPECT_TRUE(fs::exists(c.graph));
  EXPECT_EQ(c.out_dir, "out/star4");
  EXPECT_EQ(c.to_json().size(), 11u);
}

TEST(Config, RejectsUnknownAndMistypedFields) {
  ExperimentConfig c;
  try {
    apply_config_json(c, json::parse(R"({"steps": 3, "stepz": 4})"), "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("\"stepz\""), std::string::npos);
  }
  EXPECT_THROW(apply_config_json(c, json::parse(R"({"steps": -1})"), "cfg"), ConfigError);
  EXPECT_THROW(apply_config_json(c, json::parse(R"({"steps": 1.5})"), "cfg"), ConfigError);
  EXPECT_THROW(apply_config_json(c, json::parse(R"({"use_embedding": 1})"), "cfg"), ConfigError);
  EXPECT_THROW(apply_config_json(c, json::parse(R"({"learning_rate": "big"})"), "cfg"), ConfigError);
  EXPECT_THROW(apply_config_json(c, json::parse(R"({"ng_kind": "gkp"})"), "cfg"), ConfigError);
  EXPECT_THROW(apply_config_json(c, json::parse(R"([1, 2])"), "cfg"), ConfigError);
  apply_config_json(c, json::parse(R"({"learning_rate": 1})"), "cfg");
  EXPECT_EQ(c.learning_rate, 1.0);
}

TEST(Config, RelativeGraphPath) {
  ExperimentConfig c;
  apply_config_json(c, json::parse(R"({"graph": "g.json"})"), "cfg", "/some/dir");
  EXPECT_EQ(c.graph, "/some/dir/g.json");
  apply_config_json(c, json::parse(R"({"graph": "/abs/g.json"})"), "cfg", "/some/dir");
  EXPECT_EQ(c.graph, "/abs/g.json");
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.n_layers = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c.n_layers = 2;
  c.fd_step = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(DimensionError("x")), 2);
  EXPECT_EQ(exit_code_for(DivergenceError("x")), 3);
  EXPECT_EQ(exit_code_for(DomainError("x")), 3);
  EXPECT_EQ(exit_code_for(SingularError("x")), 3);
  EXPECT_EQ(exit_code_for(SizingError("x")), 4);
}

TEST(Outputs, CsvLayout) {
  TrainingTrace t;
  t.loss = {-0.5, -0.75};
  t.regularized_loss = {-0.25, -0.5};
  t.params = {{0.1, 0.2}, {0.3, 0.4}};
  t.param_names = {"a[0]", "b[0]"};
  EXPECT_EQ(loss_csv(t), "step,loss,regularized_loss\n0,-0.5,-0.25\n1,-0.75,-0.5\n");
  EXPECT_EQ(params_csv(t).rfind("step,name,value\n0,a[0],0.10000000000000001\n0,b[0],", 0), 0u);
  EXPECT_EQ(outcome_key({0, 3, 1}), "0,3,1");
}

TEST(Cli, OracleStar) {
  TempDir dir;
  const auto r = run_cli("oracle --graph " + data("star4.json") + " --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto doc = json::parse(slurp(dir.path() / "oracle.json"));
  EXPECT_EQ(doc["mc"].get<double>(), 3.0);
  EXPECT_EQ(doc["maximizers"], json::parse("[[0, 1, 1, 1]]"));
  EXPECT_EQ(tail_json(r.out), doc);
}

TEST(Cli, OraclePair) {
  TempDir dir;
  const auto r = run_cli("oracle " + data("pair.json") + " --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(tail_json(r.out)["mc"].get<double>(), 2.5);
}

TEST(Cli, SelfLoopIsAConfigError) {
  TempDir dir;
  const auto r = run_cli("oracle --graph " + data("self_loop.json") + " --out " + dir.path().string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("[2, 2]"), std::string::npos) << r.out;
}

TEST(Cli, BadArgumentsAreConfigErrors) {
  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("solve --steps many").status, 2);
  EXPECT_EQ(run_cli("solve --graph /nonexistent/graph.json --steps 0").status, 2);
  EXPECT_EQ(run_cli("solve --graph " + data("star4.json") + " --ng-kind gkp").status, 2);
  EXPECT_EQ(run_cli("--help").status, 0);
}

TEST(Cli, SolveZeroSteps) {
  TempDir dir;
  const std::string args = "solve --graph " + data("star4.json") + " --steps 0 --out ";
  const auto r = run_cli(args + (dir / "a"));
  ASSERT_EQ(r.status, 0) << r.out;
  for (const char* f : {"loss.csv", "params.csv", "distribution.json", "summary.json", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir.path() / "a" / f)) << f;
  const std::string loss = slurp(dir.path() / "a" / "loss.csv");
  EXPECT_EQ(std::count(loss.begin(), loss.end(), '\n'), 2);
  const std::string params = slurp(dir.path() / "a" / "params.csv");
  EXPECT_EQ(std::count(params.begin(), params.end(), '\n'), 1 + 16);
  const auto summary = json::parse(slurp(dir.path() / "a" / "summary.json"));
  EXPECT_EQ(summary["mc"].get<double>(), 3.0);
  EXPECT_EQ(summary["initial_loss"], summary["final_loss"]);
  const auto dist = json::parse(slurp(dir.path() / "a" / "distribution.json"));
  EXPECT_EQ(dist["probabilities"].size(), 9u * 9u * 9u * 9u);
  EXPECT_EQ(json::parse(slurp(dir.path() / "a" / "manifest.json"))["config"]["steps"], 0);
}

TEST(Cli, RerunsAreIdenticalApartFromMetadata) {
  TempDir dir;
  const std::string args = "solve --graph " + data("pair.json") + " --steps 2 --ng-kind kerr --cutoff 6 --out ";
  ASSERT_EQ(run_cli(args + (dir / "a")).status, 0);
  fs::copy(dir.path() / "a", dir.path() / "b");
  ASSERT_EQ(run_cli(args + (dir / "a")).status, 0);
  for (const char* f : {"loss.csv", "params.csv", "distribution.json", "manifest.json"})
    EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
  auto sa = json::parse(slurp(dir.path() / "a" / "summary.json"));
  auto sb = json::parse(slurp(dir.path() / "b" / "summary.json"));
  sa.erase("metadata");
  sb.erase("metadata");
  EXPECT_EQ(sa, sb);
}

TEST(Cli, ConfigFileWithOverrides) {
  TempDir dir;
  const auto r = run_cli("solve --config " + data("star4_config.json") + " --steps 1 --cutoff 4 --out " +
                         dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto m = json::parse(slurp(dir.path() / "manifest.json"));
  EXPECT_EQ(m["config"]["ng_kind"], "kerr");
  EXPECT_EQ(m["config"]["steps"], 1);
  EXPECT_EQ(m["config"]["cutoff"], 4);
}

TEST(Cli, LearningRateWarningGoesToStderr) {
  TempDir dir;
  const auto r = run_cli("solve --graph " + data("pair.json") + " --steps 0 --cutoff 4 --learning-rate 0.75 --out " +
                         dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("warning: learning_rate"), std::string::npos);
}

TEST(Cli, EmbedCheckStar) {
  TempDir dir;
  const auto r = run_cli("embed-check --graph " + data("star4.json") + " --margin 0.5 --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto doc = json::parse(slurp(dir.path() / "embed_check.json"));
  EXPECT_EQ(doc["cutoff"], 17);
  EXPECT_LT(doc["reconstruction_error"].get<double>(), 1e-10);
  EXPECT_LT(doc["mesh_reconstruction_error"].get<double>(), 1e-10);
  EXPECT_LT(doc["moment_discrepancy"].get<double>(), 1e-4);
  EXPECT_TRUE(doc["moments_agree"].get<bool>());
  EXPECT_TRUE(doc["covariance_route"].contains("validity"));
}

TEST(Cli, EmbedCheckEmptyGraphFails) {
  TempDir dir;
  const auto r = run_cli("embed-check --graph " + data("empty3.json") + " --out " + dir.path().string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("no edges"), std::string::npos) << r.out;
}

TEST(Cli, SizeGuard) {
  TempDir dir;
  const auto r = run_cli("solve --graph " + data("star4.json") + " --cutoff 200 --steps 0 --out " + dir.path().string());
  EXPECT_EQ(r.status, 4) << r.out;
  EXPECT_NE(r.out.find("cutoff 200"), std::string::npos) << r.out;

  json big = {{"n", 25}, {"edges", json::array({json::array({0, 24, 1.0})})}};
  std::ofstream(dir / "big.json") << big.dump();
  EXPECT_EQ(run_cli("oracle --graph " + (dir / "big.json") + " --out " + dir.path().string()).status, 4);
}

TEST(Cli, MlOnStarSet) {
  TempDir dir;
  const auto r = run_cli("ml --star-nodes 3 --steps 2 --cutoff 4 --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto rep = json::parse(slurp(dir.path() / "report.json"));
  EXPECT_EQ(rep["graphs"].size(), 3u);
  EXPECT_EQ(rep["graphs"][1]["label"], "star3_center1");
  EXPECT_TRUE(rep.contains("identical_output"));
  EXPECT_EQ(rep["converged"].get<bool>(), rep["final_total_loss"].get<double>() < rep["initial_total_loss"].get<double>());
  const std::string loss = slurp(dir.path() / "loss.csv");
  EXPECT_EQ(std::count(loss.begin(), loss.end(), '\n'), 4);
}

TEST(Cli, MlOnGraphFiles) {
  TempDir dir;
  const auto r = run_cli("ml --graphs " + data("star4.json") + " " + data("star4.json") +
                         " --steps 0 --cutoff 3 --out " + dir.path().string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto rep = json::parse(slurp(dir.path() / "report.json"));
  EXPECT_EQ(rep["graphs"].size(), 2u);
  EXPECT_TRUE(rep["identical_output"].get<bool>());
}
