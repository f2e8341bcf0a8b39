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

#include "freqbrdf/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "freqbrdf/error.hpp"
#include "freqbrdf/synth.hpp"
#include "test_util.hpp"

namespace freqbrdf {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("freqbrdf_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(ConfigFileTest, ParsesKeysAndComments) {
  const fs::path dir = temp_dir("config");
  std::ofstream((dir / "fit.cfg").string())
      << "# comment\n"
      << "max_degree = 6\n"
      << "lambda=1e-3   # trailing\n"
      << "\n"
      << "grid_ks = 20\n"
      << "m = 5\n"
      << "masking = false\n"
      << "uniform_weights = true\n";
  const FitConfig c = read_config((dir / "fit.cfg").string());
  EXPECT_EQ(c.optimizer.max_degree, 6);
  EXPECT_EQ(c.optimizer.lambda, 1e-3);
  EXPECT_EQ(c.optimizer.grid.n_ks, 20);
  EXPECT_EQ(c.optimizer.shadow_refresh, 5);
  EXPECT_FALSE(c.optimizer.model.masking);
  EXPECT_TRUE(c.optimizer.model.shadowing);
  EXPECT_TRUE(c.uniform_weights);
  fs::remove_all(dir);
}

TEST(ConfigFileTest, RejectsUnknownKeysAndBadValues) {
  FitConfig c;
  EXPECT_THROW(set_config_value(c, "no_such_key", "1"), InvalidInput);
  EXPECT_THROW(set_config_value(c, "iterations", "many"), InvalidInput);
  EXPECT_THROW(set_config_value(c, "masking", "maybe"), InvalidInput);
  set_config_value(c, "iterations", "0");
  EXPECT_THROW(c.validate(), InvalidInput);
  const fs::path dir = temp_dir("badcfg");
  std::ofstream((dir / "fit.cfg").string()) << "lambda 3\n";
  EXPECT_THROW(read_config((dir / "fit.cfg").string()), InvalidInput);
  fs::remove_all(dir);
}

TEST(ConfigFileTest, EntriesRoundTrip) {
  FitConfig c;
  c.optimizer.step = 0.0123;
  c.optimizer.tv_weight = 0.5;
  c.optimizer.model.fresnel = false;
  c.texture_size = 32;
  FitConfig d;
  for (const auto& [k, v] : config_entries(c)) set_config_value(d, k, v);
  EXPECT_EQ(config_entries(d), config_entries(c));
  EXPECT_EQ(d.optimizer.step, 0.0123);
}

TEST(BundleTest, WriteThenLoadRestoresTheScene) {
  const fs::path dir = temp_dir("bundle");
  const MaterialTextures truth = make_sphere_material(16, 16, 5);
  testing::SmallSceneOptions o;
  o.texture_size = 16;
  o.views = 3;
  o.image_size = 24;
  const Scene scene = testing::make_small_scene(o, truth);
  write_bundle(dir.string(), scene.env, scene.geometry->mesh(), scene.views,
               truth);
  const Bundle b = bundle_paths(dir.string());
  const Scene back = load_scene(b.env_path, b.mesh_path, b.cameras_path,
                                b.images_dir, 16);
  ASSERT_EQ(back.views.size(), scene.views.size());
  for (std::size_t i = 0; i < back.views.size(); ++i) {
    EXPECT_EQ(back.views[i].image.data, scene.views[i].image.data);
  }
  EXPECT_EQ(back.env.image().data, scene.env.image().data);
  const MaterialTextures t = import_textures(b.truth_dir);
  ASSERT_EQ(t.width, 16);
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    EXPECT_EQ(t.params[i].roughness,
              static_cast<double>(static_cast<float>(truth.params[i].roughness)));
  }

  // A view image that disagrees with its intrinsics.
  write_exr((fs::path(b.images_dir) / default_image_name(1)).string(),
            Image(10, 10, 3));
  EXPECT_THROW(load_scene(b.env_path, b.mesh_path, b.cameras_path,
                          b.images_dir, 16),
               InvalidInput);
  fs::remove_all(dir);
}

TEST(PipelineTest, EntropyRunSkipsOptimization) {
  const MaterialTextures truth = make_sphere_material(16, 16, 5);
  testing::SmallSceneOptions o;
  o.texture_size = 16;
  o.views = 20;
  o.image_size = 48;
  const Scene scene = testing::make_small_scene(o, truth);
  FitConfig config;
  config.texture_size = 16;
  const FitResult r = run_entropy(scene, config);
  EXPECT_EQ(r.report.iterations, 0);
  int valid = 0;
  for (std::size_t i = 0; i < r.textures.entropy.size(); ++i) {
    EXPECT_GE(r.textures.entropy[i], 0.0);
    EXPECT_LE(r.textures.entropy[i], 1.0);
    valid += r.textures.valid[i];
  }
  EXPECT_GT(valid, 100);
  for (const StageTiming& t : r.timings) EXPECT_NE(t.name, "optimize");
}

}  // namespace
}  // namespace freqbrdf
