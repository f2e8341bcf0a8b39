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

// Command-line driver: fit, entropy, synth, merge and bench.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freqbrdf/error.hpp"
#include "freqbrdf/parallel.hpp"
#include "freqbrdf/pipeline.hpp"
#include "freqbrdf/sh.hpp"
#include "freqbrdf/spectrum.hpp"
#include "freqbrdf/synth.hpp"
#include "freqbrdf/textures.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace freqbrdf;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// FNV-1a over the file contents.
std::uint64_t fnv1a(const std::string& path,
                    std::uint64_t h = 0xcbf29ce484222325ull) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

json hash_tree(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  json out = json::object();
  for (const fs::path& f : files) {
    out[fs::relative(f, root).generic_string()] = hex64(fnv1a(f.string()));
  }
  return out;
}

// Stages output in a sibling directory and renames it into place on commit;
// an uncommitted directory is removed.
class StagedOutput {
 public:
  explicit StagedOutput(const std::string& out) : final_(out) {
    if (out.empty()) throw InvalidInput("--out is required");
    fs::path parent = final_.parent_path();
    if (parent.empty()) parent = ".";
    std::error_code ec;
    fs::create_directories(parent, ec);
    staging_ = parent / (final_.filename().string() + ".partial-" +
                         std::to_string(::getpid()));
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) throw IoFailure("cannot create " + staging_.string());
  }
  ~StagedOutput() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }
  const fs::path& dir() const { return staging_; }
  void commit() {
    std::error_code ec;
    fs::remove_all(final_, ec);
    fs::rename(staging_, final_, ec);
    if (ec) throw IoFailure("cannot move output into " + final_.string());
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoFailure("cannot write " + path.string());
}

json timings_json(const std::vector<StageTiming>& timings) {
  json t = json::array();
  for (const StageTiming& s : timings) {
    t.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  }
  return t;
}

void print_timings(const std::vector<StageTiming>& timings) {
  for (const StageTiming& s : timings) {
    std::printf("  %-10s %8.3f s\n", s.name.c_str(), s.seconds);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct SceneArgs {
  std::string env, mesh, cameras, images;
  void add(CLI::App* app) {
    app->add_option("--env", env, "Lat-long HDR environment map (EXR)")
        ->required();
    app->add_option("--mesh", mesh, "Wavefront OBJ with UVs")->required();
    app->add_option("--cameras", cameras, "Camera JSON")->required();
    app->add_option("--images", images,
                    "Directory holding the HDR views (default: next to the "
                    "camera file)");
  }
  std::string images_dir() const {
    if (!images.empty()) return images;
    return (fs::path(cameras).parent_path() / "images").string();
  }
  json inputs() const {
    json j;
    j["env"] = {{"path", env}, {"fnv1a", hex64(fnv1a(env))}};
    j["mesh"] = {{"path", mesh}, {"fnv1a", hex64(fnv1a(mesh))}};
    j["cameras"] = {{"path", cameras}, {"fnv1a", hex64(fnv1a(cameras))}};
    j["images"] = {{"path", images_dir()}};
    return j;
  }
};

// Registers one --flag per config key; values override the config file.
struct ConfigArgs {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "Flat key = value config file");
    const FitConfig defaults;
    auto entries = config_entries(defaults);
    // spectrum_only has its own boolean flag.
    std::erase_if(entries, [](const auto& e) { return e.first == "spectrum_only"; });
    values.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      values[i].first = entries[i].first;
      std::string flag = "--" + entries[i].first;
      std::replace(flag.begin(), flag.end(), '_', '-');
      app->add_option(flag, values[i].second,
                      "Override " + entries[i].first + " (default " +
                          entries[i].second + ")");
    }
  }

  FitConfig resolve() const {
    FitConfig c;
    if (!config_path.empty()) apply_config_file(c, config_path);
    for (const auto& [key, value] : values) {
      if (!value.empty()) set_config_value(c, key, value);
    }
    c.validate();
    return c;
  }
};

json config_json(const FitConfig& c) {
  json j = json::object();
  for (const auto& [k, v] : config_entries(c)) j[k] = v;
  return j;
}

std::optional<double> ground_truth_mse(const MaterialTextures& estimate,
                                       const std::string& truth_dir) {
  if (truth_dir.empty()) return std::nullopt;
  const MaterialTextures truth = import_textures(truth_dir);
  MaterialTextures est = estimate;
  fill_holes(est);
  if (est.width != truth.width || est.height != truth.height) {
    est = resample(est, truth.width, truth.height);
  }
  return parameter_mse(est, truth);
}

int cmd_fit(const SceneArgs& scene_args, const ConfigArgs& config_args,
            bool spectrum_only, const std::string& out,
            const std::string& truth_dir, bool entropy_only,
            const std::string& grid) {
  FitConfig config = config_args.resolve();
  if (spectrum_only) config.spectrum_only = true;
  if (!grid.empty()) {
    const auto x = grid.find('x');
    if (x == std::string::npos) {
      throw InvalidInput("--grid expects <ks>x<alpha>, e.g. 10x10");
    }
    set_config_value(config, "grid_ks", grid.substr(0, x));
    set_config_value(config, "grid_alpha", grid.substr(x + 1));
    config.validate();
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Scene scene =
      load_scene(scene_args.env, scene_args.mesh, scene_args.cameras,
                 scene_args.images_dir(), config.texture_size);
  std::vector<StageTiming> timings{{"load", seconds_since(t0)}};

  FitResult result =
      entropy_only ? run_entropy(scene, config) : run_fit(scene, config);
  timings.insert(timings.end(), result.timings.begin(), result.timings.end());

  StagedOutput staged(out);
  const auto t_export = std::chrono::steady_clock::now();
  const MaterialTextures& tex = result.textures;
  if (entropy_only) {
    Image ent(tex.width, tex.height, 1), mask(tex.width, tex.height, 1);
    for (int y = 0; y < tex.height; ++y) {
      for (int x = 0; x < tex.width; ++x) {
        ent.at(x, y) = static_cast<float>(tex.entropy[tex.index(x, y)]);
        mask.at(x, y) = tex.valid[tex.index(x, y)] ? 1.0f : 0.0f;
      }
    }
    write_exr((staged.dir() / "entropy.exr").string(), ent);
    write_exr((staged.dir() / "valid.exr").string(), mask);
  } else {
    export_textures(tex, staged.dir().string(), config.export_resolution);
  }
  timings.push_back({"export", seconds_since(t_export)});

  int valid = 0;
  double entropy_sum = 0.0;
  for (std::size_t i = 0; i < tex.valid.size(); ++i) {
    if (tex.valid[i]) {
      ++valid;
      entropy_sum += tex.entropy[i];
    }
  }
  json metrics;
  metrics["valid_texels"] = valid;
  metrics["mean_entropy"] = valid > 0 ? entropy_sum / valid : 1.0;
  if (!entropy_only) {
    metrics["initial_loss"] = result.report.initial_loss;
    metrics["final_loss"] = result.report.final_loss;
    metrics["iterations"] = result.report.iterations;
  }
  const std::optional<double> mse = ground_truth_mse(tex, truth_dir);
  if (mse) metrics["parameter_mse"] = *mse;

  json manifest;
  manifest["command"] = entropy_only ? "entropy" : "fit";
  manifest["config"] = config_json(config);
  manifest["inputs"] = scene_args.inputs();
  if (!truth_dir.empty()) manifest["inputs"]["ground_truth"] = truth_dir;
  manifest["threads"] = thread_count();
  manifest["timings"] = timings_json(timings);
  manifest["metrics"] = metrics;
  manifest["outputs"] = hash_tree(staged.dir());
  write_json(staged.dir() / "manifest.json", manifest);
  staged.commit();

  std::printf("%s: %d valid texels, mean entropy %.4f\n",
              entropy_only ? "entropy" : "fit", valid,
              metrics["mean_entropy"].get<double>());
  print_timings(timings);
  if (mse) std::printf("parameter MSE: %.6f\n", *mse);
  return 0;
}

json directions_json(const std::vector<Direction>& dirs) {
  json a = json::array();
  for (const Direction& d : dirs) a.push_back({d.theta, d.phi});
  return a;
}

json samples_json(const DirectionalSamples& s) {
  json values = json::array();
  for (int i = 0; i < s.size(); ++i) values.push_back(s.values(i, 0));
  return {{"directions", directions_json(s.directions)},
          {"values", values},
          {"weights", std::vector<double>(s.weights.data(),
                                          s.weights.data() + s.size())}};
}

json spectrum_json(const PowerSpectrumd& s) {
  return std::vector<double>(s.values().data(),
                             s.values().data() + s.values().rows());
}

void synth_sphere(const fs::path& dir, PresetLight light,
                  const SphereScene& scene, RenderMode mode,
                  std::uint64_t seed) {
  const EnvironmentMap env = make_preset_environment(light, 128, seed);
  const MaterialTextures truth =
      make_sphere_material(scene.texture_size, scene.texture_size, seed);
  std::vector<CameraView> views =
      make_orbit_views(scene.views, scene.camera_distance, scene.image_size,
                       scene.fov, seed);
  Mesh mesh = make_scene_sphere(scene);
  const SurfaceGeometry geom(mesh, scene.texture_size, scene.texture_size);
  SynthOptions opts;
  opts.mode = mode;
  std::vector<Image> images = synth_generate(geom, env, truth, views, opts);
  for (std::size_t i = 0; i < views.size(); ++i) {
    views[i].image = std::move(images[i]);
  }
  write_bundle(dir.string(), env, mesh, views, truth);
}

int cmd_synth(const std::string& preset, const std::string& out,
              std::uint64_t seed, const std::string& mode_name, int views) {
  RenderMode mode;
  if (mode_name == "convolution") {
    mode = RenderMode::kConvolution;
  } else if (mode_name == "quadrature") {
    mode = RenderMode::kQuadrature;
  } else {
    throw InvalidInput("--mode must be convolution or quadrature");
  }
  StagedOutput staged(out);
  json summary;
  summary["preset"] = preset;
  summary["seed"] = seed;
  if (preset == "sphere-4env") {
    SphereScene scene;
    if (views > 0) scene.views = views;
    json bundles = json::array();
    for (PresetLight l : {PresetLight::kSunSky, PresetLight::kStudio,
                          PresetLight::kOvercast, PresetLight::kSunset}) {
      synth_sphere(staged.dir() / preset_light_name(l), l, scene, mode, seed);
      bundles.push_back(preset_light_name(l));
    }
    summary["mode"] = mode_name;
    summary["bundles"] = bundles;
  } else if (preset == "viewsweep") {
    json bundles = json::array();
    for (int n : {10, 25, 50, 100}) {
      SphereScene scene;
      scene.views = n;
      char name[32];
      std::snprintf(name, sizeof(name), "views_%03d", n);
      synth_sphere(staged.dir() / name, PresetLight::kSunSky, scene, mode,
                   seed);
      bundles.push_back({{"bundle", name}, {"views", n}});
    }
    summary["mode"] = mode_name;
    summary["bundles"] = bundles;
  } else if (preset == "figure3") {
    const Figure3Scenario s = make_figure3_scenario(seed);
    json j;
    j["alpha"] = s.alpha;
    j["light_max_degree"] = s.light.max_degree();
    j["light_coefficients"] = std::vector<double>(
        s.light.coeffs().data(),
        s.light.coeffs().data() + s.light.coeffs().rows());
    j["retained_samples"] = s.incoming.size();
    j["incoming"] = samples_json(s.incoming);
    j["outgoing"] = samples_json(s.outgoing);
    j["masked"] = directions_json(s.masked);
    write_json(staged.dir() / "figure3.json", j);
    summary["retained_samples"] = s.incoming.size();
  } else if (preset == "figure5") {
    json cases = json::array();
    for (const Figure5Case& c : make_figure5_cases()) {
      cases.push_back({{"name", c.name},
                       {"ks", c.ks},
                       {"alpha", c.alpha},
                       {"light_spectrum", spectrum_json(c.spectra.light)},
                       {"outgoing_spectrum", spectrum_json(c.spectra.outgoing)},
                       {"b00", c.spectra.b00(0)},
                       {"l00", c.spectra.l00(0)},
                       {"irradiance", c.spectra.irradiance(0)}});
    }
    write_json(staged.dir() / "figure5.json", {{"cases", cases}});
  } else {
    throw InvalidInput("unknown preset '" + preset +
                       "'; expected sphere-4env, figure3, figure5 or "
                       "viewsweep");
  }
  summary["outputs"] = hash_tree(staged.dir());
  write_json(staged.dir() / "manifest.json", summary);
  staged.commit();
  std::printf("synth: wrote %s preset to %s\n", preset.c_str(), out.c_str());
  return 0;
}

int cmd_merge(const std::vector<std::string>& runs, const std::string& out,
              const std::string& truth_dir) {
  if (runs.size() < 2) throw InvalidInput("--runs needs at least two runs");
  std::vector<MaterialTextures> loaded;
  json inputs = json::array();
  for (const std::string& r : runs) {
    loaded.push_back(import_textures(r));
    inputs.push_back(r);
  }
  const MaterialTextures merged = merge_textures(loaded);
  StagedOutput staged(out);
  export_textures(merged, staged.dir().string(), 0);
  json manifest;
  manifest["command"] = "merge";
  manifest["inputs"] = inputs;
  json metrics;
  if (!truth_dir.empty()) {
    json per_run = json::array();
    for (const MaterialTextures& t : loaded) {
      per_run.push_back(*ground_truth_mse(t, truth_dir));
    }
    metrics["run_mse"] = per_run;
    metrics["merged_mse"] = *ground_truth_mse(merged, truth_dir);
  }
  manifest["metrics"] = metrics;
  manifest["outputs"] = hash_tree(staged.dir());
  write_json(staged.dir() / "manifest.json", manifest);
  staged.commit();
  std::printf("merge: %zu runs -> %s\n", runs.size(), out.c_str());
  if (metrics.contains("merged_mse")) {
    std::printf("merged MSE: %.6f\n", metrics["merged_mse"].get<double>());
  }
  return 0;
}

json bench_spectra() {
  const Figure3Scenario s = make_figure3_scenario(0);
  const int lmax = 8;
  json rows = json::array();
  for (double lambda : {0.0, 1e-6, 1e-4, 1e-2, 1e-1, 1.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ShFitter fitter(s.outgoing.directions, s.outgoing.weights, lmax,
                          lambda);
    const ShExpansiond fit = fitter.fit(s.outgoing.values);
    const double seconds = seconds_since(t0);
    const Eigen::MatrixXd pred = fit.evaluate(s.outgoing.directions);
    const Eigen::VectorXd r = pred.col(0) - s.outgoing.values.col(0);
    const double residual = r.cwiseProduct(s.outgoing.weights).dot(r);
    double penalty = 0.0;
    const Eigen::VectorXd reg = exponential_degree_weights(lmax);
    for (int i = 0; i < sh_count(lmax); ++i) {
      penalty += reg(i) * fit.coeffs()(i, 0) * fit.coeffs()(i, 0);
    }
    rows.push_back({{"lambda", lambda},
                    {"weighted_residual", residual},
                    {"penalty_norm", penalty},
                    {"seconds", seconds}});
  }
  return {{"suite", "spectra"}, {"max_degree", lmax}, {"fits", rows}};
}

json bench_entropy(std::uint64_t seed) {
  SplitMix64 rng(seed + 1);
  const std::vector<Figure5Case> cases = make_figure5_cases();
  const GridConfig grid;
  constexpr int kTexels = 2000;
  std::vector<double> ms;
  ms.reserve(kTexels);
  double entropy_sum = 0.0;
  for (int i = 0; i < kTexels; ++i) {
    SpectrumPair s = cases[static_cast<std::size_t>(i) % cases.size()].spectra;
    s.outgoing.values() *= rng.uniform(0.5, 1.5);
    const auto t0 = std::chrono::steady_clock::now();
    const PosteriorGrid p = grid_search(s, grid);
    ms.push_back(1e3 * seconds_since(t0));
    entropy_sum += p.entropy;
  }
  std::vector<double> sorted = ms;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double f) {
    return sorted[static_cast<std::size_t>(f * (sorted.size() - 1))];
  };
  const double edges[] = {0.001, 0.01, 0.1, 1.0, 10.0};
  json hist = json::array();
  double lo = 0.0;
  for (double hi : edges) {
    const auto n = std::count_if(ms.begin(), ms.end(), [&](double v) {
      return v >= lo && v < hi;
    });
    hist.push_back({{"lo_ms", lo}, {"hi_ms", hi}, {"count", n}});
    lo = hi;
  }
  hist.push_back({{"lo_ms", lo},
                  {"hi_ms", nullptr},
                  {"count", std::count_if(ms.begin(), ms.end(),
                                          [&](double v) { return v >= lo; })}});
  return {{"suite", "entropy"},
          {"cells", grid.n_ks * grid.n_alpha},
          {"texels", kTexels},
          {"median_ms", q(0.5)},
          {"p90_ms", q(0.9)},
          {"max_ms", sorted.back()},
          {"mean_entropy", entropy_sum / kTexels},
          {"histogram", hist}};
}

json bench_endtoend(std::uint64_t seed) {
  json rows = json::array();
  const SphereScene sc;
  const MaterialTextures truth =
      make_sphere_material(sc.texture_size, sc.texture_size, seed);
  for (PresetLight l : {PresetLight::kSunSky, PresetLight::kStudio,
                        PresetLight::kOvercast, PresetLight::kSunset}) {
    const auto t0 = std::chrono::steady_clock::now();
    Scene scene = make_scene(
        make_preset_environment(l, 128, seed), make_scene_sphere(sc),
        sc.texture_size,
        make_orbit_views(sc.views, sc.camera_distance, sc.image_size, sc.fov,
                         seed));
    std::vector<Image> images = synth_generate(
        *scene.geometry, scene.env, truth, scene.views, SynthOptions{});
    for (std::size_t i = 0; i < images.size(); ++i) {
      scene.views[i].image = std::move(images[i]);
    }
    const double render = seconds_since(t0);
    FitConfig config;
    const auto t1 = std::chrono::steady_clock::now();
    const FitResult fit = run_fit(scene, config);
    rows.push_back({{"preset", preset_light_name(l)},
                    {"render_seconds", render},
                    {"fit_seconds", seconds_since(t1)},
                    {"parameter_mse", parameter_mse(fit.textures, truth)},
                    {"timings", timings_json(fit.timings)}});
  }
  return {{"suite", "endtoend"}, {"presets", rows}};
}

int cmd_bench(const std::string& suite, const std::string& out,
              std::uint64_t seed) {
  json report;
  if (suite == "spectra") {
    report = bench_spectra();
  } else if (suite == "entropy") {
    report = bench_entropy(seed);
  } else if (suite == "endtoend") {
    report = bench_endtoend(seed);
  } else {
    throw InvalidInput("unknown suite '" + suite +
                       "'; expected spectra, entropy or endtoend");
  }
  report["threads"] = thread_count();
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_json(out, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatially varying BRDF recovery by spherical harmonics "
               "spectrum analysis"};
  app.require_subcommand(1);
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for synthetic scenes and benchmarks");

  SceneArgs fit_scene, entropy_scene;
  ConfigArgs fit_config, entropy_config;
  std::string fit_out, entropy_out, truth, entropy_truth, grid;
  bool spectrum_only = false;
  CLI::App* fit = app.add_subcommand("fit", "Recover material textures");
  fit_scene.add(fit);
  fit_config.add(fit);
  fit->add_option("--out", fit_out, "Output directory")->required();
  fit->add_flag("--spectrum-only", spectrum_only,
                "Export the spectrum grid estimate without optimization");
  fit->add_option("--ground-truth", truth,
                  "Ground-truth texture directory; prints parameter MSE");

  CLI::App* ent = app.add_subcommand("entropy", "Entropy map only");
  entropy_scene.add(ent);
  entropy_config.add(ent);
  ent->add_option("--out", entropy_out, "Output directory")->required();
  ent->add_option("--grid", grid, "Posterior grid as <ks>x<alpha>");

  std::string preset, synth_out, mode = "convolution";
  int synth_views = 0;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic bundle");
  synth->add_option("--preset", preset,
                    "sphere-4env, figure3, figure5 or viewsweep")
      ->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--mode", mode, "convolution or quadrature rendering");
  synth->add_option("--views", synth_views,
                    "View count for sphere-4env (default 100)");

  std::vector<std::string> runs;
  std::string merge_out, merge_truth;
  CLI::App* merge = app.add_subcommand("merge", "Merge runs by entropy");
  merge->add_option("--runs", runs, "Texture directories")->required();
  merge->add_option("--out", merge_out, "Output directory")->required();
  merge->add_option("--ground-truth", merge_truth,
                    "Ground-truth texture directory; prints MSE");

  std::string suite, bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Timing and accuracy report");
  bench->add_option("--suite", suite, "spectra, entropy or endtoend")
      ->required();
  bench->add_option("--out", bench_out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    set_thread_count(threads);
    if (*fit) {
      return cmd_fit(fit_scene, fit_config, spectrum_only, fit_out, truth,
                     false, "");
    }
    if (*ent) {
      return cmd_fit(entropy_scene, entropy_config, false, entropy_out, "",
                     true, grid);
    }
    if (*synth) return cmd_synth(preset, synth_out, seed, mode, synth_views);
    if (*merge) return cmd_merge(runs, merge_out, merge_truth);
    if (*bench) return cmd_bench(suite, bench_out, seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::kNumerical ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}
