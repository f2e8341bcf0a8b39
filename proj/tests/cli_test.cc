// Copyright 2026 The freqbrdf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd =
      std::string(FREQBRDF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("freqbrdf_cli_" +
             std::string(::testing::UnitTest::GetInstance()
                             ->current_test_info()
                             ->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string path(const std::string& name) const {
    return (root_ / name).string();
  }

  fs::path root_;
};

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("synth --preset nothing --out " + path("x")), 2);
  EXPECT_FALSE(fs::exists(path("x")));
}

TEST_F(CliTest, SameSeedGivesIdenticalOutput) {
  ASSERT_EQ(run("--seed 3 synth --preset figure3 --out " + path("a")), 0);
  ASSERT_EQ(run("--seed 3 synth --preset figure3 --out " + path("b")), 0);
  ASSERT_EQ(run("--seed 4 synth --preset figure3 --out " + path("c")), 0);
  const std::string a = slurp(path("a/figure3.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b/figure3.json")));
  EXPECT_NE(a, slurp(path("c/figure3.json")));
}

TEST_F(CliTest, FitEntropyAndMergeOnSyntheticBundle) {
  ASSERT_EQ(run("synth --preset sphere-4env --views 12 --out " + path("s")),
            0);
  const std::string sunsky = path("s/sunsky");
  for (const char* f : {"env.exr", "mesh.obj", "cameras.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(sunsky) / f)) << f;
  }
  const std::string inputs = " --env " + sunsky + "/env.exr --mesh " +
                             sunsky + "/mesh.obj --cameras " + sunsky +
                             "/cameras.json --texture-size 16"
                             " --export-resolution 0";
  ASSERT_EQ(run("fit" + inputs + " --iterations 5 --out " + path("fit")), 0);
  for (const char* f : {"base_color.exr", "roughness.exr", "metallic.exr",
                        "entropy.exr", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(path("fit")) / f)) << f;
  }
  ASSERT_EQ(run("entropy" + inputs + " --out " + path("ent")), 0);
  EXPECT_TRUE(fs::exists(path("ent/entropy.exr")));
  const std::string studio = path("s/studio");
  ASSERT_EQ(run("fit --env " + studio + "/env.exr --mesh " + studio +
                "/mesh.obj --cameras " + studio +
                "/cameras.json --texture-size 16 --export-resolution 0"
                " --iterations 5 --out " + path("fit2")),
            0);
  EXPECT_EQ(run("merge --runs " + path("fit") + " " + path("fit2") +
                " --out " + path("merged")),
            0);
  // Entropy-only runs carry no parameter maps.
  EXPECT_EQ(run("merge --runs " + path("fit") + " " + path("ent") +
                " --out " + path("merged2")),
            2);
  EXPECT_TRUE(fs::exists(path("merged/roughness.exr")));

  // A camera file that does not exist: input error, nothing written.
  const std::string missing = " --env " + sunsky + "/env.exr --mesh " +
                              sunsky + "/mesh.obj --cameras " +
                              path("none.json") + " --texture-size 16";
  EXPECT_EQ(run("fit" + missing + " --out " + path("bad")), 2);
  EXPECT_FALSE(fs::exists(path("bad")));
  for (const auto& e : fs::directory_iterator(root_)) {
    EXPECT_EQ(e.path().filename().string().find(".partial"),
              std::string::npos);
  }
}

}  // namespace
