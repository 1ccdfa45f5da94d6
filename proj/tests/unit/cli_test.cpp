// Copyright 2026 The augforge Authors.
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

// Drives the built augforge binary and checks its exit codes.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "augforge/config.hpp"
#include "augforge/manifest.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace augforge {
namespace {

namespace fs = std::filesystem;

const fs::path kScratch = fs::temp_directory_path() / "augforge_cli_test";

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const fs::path log = kScratch / "stdout.txt";
  const std::string cmd = std::string(AUGFORGE_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  o.out = ss.str();
  return o;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kScratch);
    synth::write_tabletop_dataset(kScratch / "in", 2, 80, 60, 1, 3);
    PipelineConfig c;
    c.workspace = synth::tabletop_workspace();
    c.num_augmentations = 3;
    std::ofstream(kScratch / "config.json") << config_to_json(c);
  }
  static void TearDownTestSuite() { fs::remove_all(kScratch); }

  static std::string in() { return (kScratch / "in").string(); }
  static std::string config() { return (kScratch / "config.json").string(); }
};

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("augment-structured --input " + in()).code, 1);
  EXPECT_EQ(run("augment-structured --input " + in() + " --output x --backend carrier-pigeon").code, 1);
  EXPECT_EQ(run("augment-structured --input " + in() + " --output x --backend http").code, 1);
  EXPECT_EQ(run("--version").code, 0);
}

TEST_F(Cli, BadConfigIsUsageError) {
  const fs::path bad = kScratch / "bad.json";
  std::ofstream(bad) << R"({"num_augmentations": 2, "colour": "red"})";
  const Outcome o = run("augment-structured --input " + in() + " --output " +
                        (kScratch / "o").string() + " --config " + bad.string());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("colour"), std::string::npos);
}

TEST_F(Cli, StructuredRunSucceedsAndFlagsOverrideConfig) {
  const fs::path out = kScratch / "run";
  const Outcome o = run("augment-structured --input " + in() + " --output " + out.string() +
                        " --config " + config() + " --num-augmentations 2 --seed 4 --workers 2");
  ASSERT_EQ(o.code, 0) << o.out;
  const DatasetManifest m = load_manifest(out);
  EXPECT_EQ(m.episodes.size(), 4u);
  EXPECT_EQ(m.records[0].global_seed, 4u);

  EXPECT_EQ(run("validate --input " + out.string()).code, 0);
  const Outcome stats = run("stats --input " + out.string() + " --json");
  EXPECT_EQ(stats.code, 0);
  EXPECT_NE(stats.out.find("\"records\": 4"), std::string::npos) << stats.out;
}

TEST_F(Cli, InvalidDatasetExitsTwo) {
  const fs::path broken = kScratch / "broken";
  fs::copy(kScratch / "in", broken, fs::copy_options::recursive);
  DatasetManifest m = load_manifest(broken);
  m.episodes[0].frame_count = 5;
  save_manifest(broken, m);
  EXPECT_EQ(run("validate --input " + broken.string()).code, 2);
  EXPECT_EQ(run("augment-structured --input " + broken.string() + " --output " +
                (kScratch / "o2").string() + " --config " + config())
                .code,
            2);
}

TEST_F(Cli, UnreachableBackendExceedsBudget) {
  const Outcome o = run("augment-structured --input " + in() + " --output " +
                        (kScratch / "down").string() + " --config " + config() +
                        " --backend http --backend-url http://127.0.0.1:1");
  EXPECT_EQ(o.code, 3) << o.out;
  EXPECT_NE(o.out.find("failure budget exceeded"), std::string::npos);
}

TEST_F(Cli, BackendUrlFromEnvironment) {
  const Outcome o = run("augment-structured --input " + in() + " --output " +
                        (kScratch / "env").string() + " --config " + config() +
                        " --backend http --backend-url \"$NOPE\"");
  EXPECT_EQ(o.code, 1);
  ::setenv("AUGFORGE_BACKEND_URL", "http://127.0.0.1:1", 1);
  const Outcome e = run("augment-structured --input " + in() + " --output " +
                        (kScratch / "env2").string() + " --config " + config() + " --backend http");
  ::unsetenv("AUGFORGE_BACKEND_URL");
  EXPECT_EQ(e.code, 3) << e.out;
}

TEST_F(Cli, BaselineNeedsPatchesExceptSpatial) {
  EXPECT_EQ(run("baseline --input " + in() + " --output " + (kScratch / "b1").string() +
                " --mode copy_paste")
                .code,
            1);
  EXPECT_EQ(run("baseline --input " + in() + " --output " + (kScratch / "b2").string() +
                " --mode spatial --seed 3")
                .code,
            0);
}

TEST_F(Cli, WorkerCountInvisibleInOutput) {
  const fs::path a = kScratch / "w1";
  const fs::path b = kScratch / "w3";
  ASSERT_EQ(run("augment-structured --input " + in() + " --output " + a.string() + " --config " +
                config() + " --workers 1")
                .code,
            0);
  ASSERT_EQ(run("augment-structured --input " + in() + " --output " + b.string() + " --config " +
                config() + " --workers 3")
                .code,
            0);
  EXPECT_EQ(oracle::tree_hash(a), oracle::tree_hash(b));
}

}  // namespace
}  // namespace augforge
