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

#ifndef FREQBRDF_PIPELINE_HPP_
#define FREQBRDF_PIPELINE_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "freqbrdf/camera.hpp"
#include "freqbrdf/environment.hpp"
#include "freqbrdf/geometry.hpp"
#include "freqbrdf/optimizer.hpp"
#include "freqbrdf/textures.hpp"

namespace freqbrdf {

struct FitConfig {
  OptimizerConfig optimizer;
  int texture_size = 64;
  // Export resolution; 0 keeps texture_size.
  int export_resolution = 512;
  bool uniform_weights = false;
  bool spectrum_only = false;

  void validate() const;
};

// Flat "key = value" entries; '#' starts a comment. Unknown keys and
// unparsable values throw InvalidInput.
void set_config_value(FitConfig& config, const std::string& key,
                      const std::string& value);
FitConfig read_config(const std::string& path);
void apply_config_file(FitConfig& config, const std::string& path);
std::vector<std::pair<std::string, std::string>> config_entries(
    const FitConfig& config);

struct Scene {
  EnvironmentMap env;
  std::unique_ptr<SurfaceGeometry> geometry;
  std::vector<CameraView> views;
};

Scene make_scene(EnvironmentMap env, Mesh mesh, int texture_size,
                 std::vector<CameraView> views);

// Loads and cross-checks every input. Throws the input errors of the
// individual readers plus InconsistentInput for an empty view list.
Scene load_scene(const std::string& env_path, const std::string& mesh_path,
                 const std::string& cameras_path,
                 const std::string& images_dir, int texture_size);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct FitResult {
  MaterialTextures textures;
  OptimizeReport report;
  std::vector<StageTiming> timings;
};

// Projection, shading contexts and spectrum initialization. Exposed so that
// callers can inspect the texel grid before optimization.
TexelGrid prepare_grid(const Scene& scene, const FitConfig& config,
                       std::vector<StageTiming>* timings = nullptr);

// Full fit: prepare_grid followed by optimize unless spectrum_only is set.
// Invalid texels keep the prior mean with entropy 1.
FitResult run_fit(const Scene& scene, const FitConfig& config);

// Spectrum initialization only; the textures carry the grid-argmax
// parameters and the entropy map.
FitResult run_entropy(const Scene& scene, const FitConfig& config);

// Scene bundle layout: env.exr, mesh.obj, cameras.json, images/view_###.exr
// and the ground-truth maps under truth/.
struct Bundle {
  std::string env_path;
  std::string mesh_path;
  std::string cameras_path;
  std::string images_dir;
  std::string truth_dir;
};
Bundle bundle_paths(const std::string& dir);

void write_bundle(const std::string& dir, const EnvironmentMap& env,
                  const Mesh& mesh, const std::vector<CameraView>& views,
                  const MaterialTextures& truth);

}  // namespace freqbrdf

#endif  // FREQBRDF_PIPELINE_HPP_
