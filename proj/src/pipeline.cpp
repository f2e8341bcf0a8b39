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

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freqbrdf/error.hpp"
#include "freqbrdf/projection.hpp"

namespace freqbrdf {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw InvalidInput("config key " + key + " expects an integer, got '" + v +
                       "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw InvalidInput("config key " + key + " expects a number, got '" + v +
                       "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidInput("config key " + key + " expects a boolean, got '" + v +
                     "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(std::vector<StageTiming>* timings, const char* name,
            Stopwatch& watch) {
  const double s = watch.lap();
  if (timings) timings->push_back({name, s});
}

}  // namespace

void FitConfig::validate() const {
  optimizer.validate();
  if (texture_size < 1 || texture_size > 8192) {
    throw InvalidInput("texture_size must lie in [1, 8192]");
  }
  if (export_resolution < 0 || export_resolution > 8192) {
    throw InvalidInput("export_resolution must lie in [0, 8192]");
  }
}

void set_config_value(FitConfig& c, const std::string& key,
                      const std::string& raw) {
  const std::string v = trim(raw);
  OptimizerConfig& o = c.optimizer;
  if (key == "max_degree") {
    o.max_degree = parse_int(key, v);
  } else if (key == "lambda") {
    o.lambda = parse_double(key, v);
  } else if (key == "sigma") {
    o.grid.sigma = parse_double(key, v);
  } else if (key == "grid_ks") {
    o.grid.n_ks = parse_int(key, v);
  } else if (key == "grid_alpha") {
    o.grid.n_alpha = parse_int(key, v);
  } else if (key == "iterations") {
    o.iterations = parse_int(key, v);
  } else if (key == "step") {
    o.step = parse_double(key, v);
  } else if (key == "m" || key == "shadow_refresh") {
    o.shadow_refresh = parse_int(key, v);
  } else if (key == "tv_weight") {
    o.tv_weight = parse_double(key, v);
  } else if (key == "weight_a") {
    o.weight_a = parse_double(key, v);
  } else if (key == "weight_b") {
    o.weight_b = parse_double(key, v);
  } else if (key == "prefilter") {
    o.prefilter = parse_bool(key, v);
  } else if (key == "shadowing") {
    o.model.shadowing = parse_bool(key, v);
  } else if (key == "masking") {
    o.model.masking = parse_bool(key, v);
  } else if (key == "fresnel") {
    o.model.fresnel = parse_bool(key, v);
  } else if (key == "texture_size") {
    c.texture_size = parse_int(key, v);
  } else if (key == "export_resolution") {
    c.export_resolution = parse_int(key, v);
  } else if (key == "uniform_weights") {
    c.uniform_weights = parse_bool(key, v);
  } else if (key == "spectrum_only") {
    c.spectrum_only = parse_bool(key, v);
  } else {
    throw InvalidInput("unknown config key '" + key + "'");
  }
}

void apply_config_file(FitConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    }
    set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

FitConfig read_config(const std::string& path) {
  FitConfig c;
  apply_config_file(c, path);
  return c;
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const FitConfig& c) {
  const OptimizerConfig& o = c.optimizer;
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  return {
      {"max_degree", std::to_string(o.max_degree)},
      {"lambda", fmt(o.lambda)},
      {"sigma", fmt(o.grid.sigma)},
      {"grid_ks", std::to_string(o.grid.n_ks)},
      {"grid_alpha", std::to_string(o.grid.n_alpha)},
      {"iterations", std::to_string(o.iterations)},
      {"step", fmt(o.step)},
      {"m", std::to_string(o.shadow_refresh)},
      {"tv_weight", fmt(o.tv_weight)},
      {"weight_a", fmt(o.weight_a)},
      {"weight_b", fmt(o.weight_b)},
      {"prefilter", b(o.prefilter)},
      {"shadowing", b(o.model.shadowing)},
      {"masking", b(o.model.masking)},
      {"fresnel", b(o.model.fresnel)},
      {"texture_size", std::to_string(c.texture_size)},
      {"export_resolution", std::to_string(c.export_resolution)},
      {"uniform_weights", b(c.uniform_weights)},
      {"spectrum_only", b(c.spectrum_only)},
  };
}

Scene make_scene(EnvironmentMap env, Mesh mesh, int texture_size,
                 std::vector<CameraView> views) {
  if (views.empty()) throw InconsistentInput("at least one view is required");
  mesh.validate();
  for (const CameraView& v : views) v.validate();
  Scene s;
  s.env = std::move(env);
  s.geometry = std::make_unique<SurfaceGeometry>(std::move(mesh), texture_size,
                                                 texture_size);
  s.views = std::move(views);
  return s;
}

Scene load_scene(const std::string& env_path, const std::string& mesh_path,
                 const std::string& cameras_path,
                 const std::string& images_dir, int texture_size) {
  EnvironmentMap env = load_environment(env_path);
  Mesh mesh = read_obj(mesh_path);
  std::vector<CameraView> views = read_cameras(cameras_path, images_dir);
  return make_scene(std::move(env), std::move(mesh), texture_size,
                    std::move(views));
}

TexelGrid prepare_grid(const Scene& scene, const FitConfig& config,
                       std::vector<StageTiming>* timings) {
  config.validate();
  Stopwatch watch;
  ProjectionOptions popt;
  popt.weight_a = config.optimizer.weight_a;
  popt.weight_b = config.optimizer.weight_b;
  popt.uniform_weights = config.uniform_weights;
  TexelGrid grid = make_texel_grid(
      *scene.geometry, project_observations(scene.views, *scene.geometry, popt));
  record(timings, "project", watch);

  const LightBasis basis(config.optimizer.max_degree);
  const EnvironmentLight light(scene.env);
  build_shading(grid, light, basis);
  record(timings, "shading", watch);

  initialize_from_spectrum(grid, light, config.optimizer);
  record(timings, "spectrum", watch);
  return grid;
}

FitResult run_fit(const Scene& scene, const FitConfig& config) {
  FitResult out;
  TexelGrid grid = prepare_grid(scene, config, &out.timings);
  if (!config.spectrum_only) {
    Stopwatch watch;
    const LightBasis basis(config.optimizer.max_degree);
    const EnvironmentLight light(scene.env);
    out.report = optimize(grid, light, basis, config.optimizer);
    record(&out.timings, "optimize", watch);
  }
  out.textures = MaterialTextures::from_grid(grid);
  return out;
}

FitResult run_entropy(const Scene& scene, const FitConfig& config) {
  FitResult out;
  const TexelGrid grid = prepare_grid(scene, config, &out.timings);
  out.textures = MaterialTextures::from_grid(grid);
  return out;
}

Bundle bundle_paths(const std::string& dir) {
  const fs::path d(dir);
  return {(d / "env.exr").string(), (d / "mesh.obj").string(),
          (d / "cameras.json").string(), (d / "images").string(),
          (d / "truth").string()};
}

void write_bundle(const std::string& dir, const EnvironmentMap& env,
                  const Mesh& mesh, const std::vector<CameraView>& views,
                  const MaterialTextures& truth) {
  const Bundle b = bundle_paths(dir);
  std::error_code ec;
  fs::create_directories(b.images_dir, ec);
  fs::create_directories(b.truth_dir, ec);
  if (ec) throw IoFailure("cannot create bundle directory " + dir);
  save_environment(b.env_path, env);
  write_obj(b.mesh_path, mesh);
  write_cameras(b.cameras_path, views);
  for (std::size_t i = 0; i < views.size(); ++i) {
    const std::string name = views[i].image_name.empty()
                                 ? default_image_name(static_cast<int>(i))
                                 : views[i].image_name;
    write_exr((fs::path(b.images_dir) / name).string(), views[i].image);
  }
  export_textures(truth, b.truth_dir, 0, false);
}

}  // namespace freqbrdf
