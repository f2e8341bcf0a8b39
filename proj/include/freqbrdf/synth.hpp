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

#ifndef FREQBRDF_SYNTH_HPP_
#define FREQBRDF_SYNTH_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "freqbrdf/brdf.hpp"
#include "freqbrdf/camera.hpp"
#include "freqbrdf/environment.hpp"
#include "freqbrdf/geometry.hpp"
#include "freqbrdf/spectrum.hpp"
#include "freqbrdf/textures.hpp"

namespace freqbrdf {

enum class RenderMode { kConvolution, kQuadrature };

struct SynthOptions {
  RenderMode mode = RenderMode::kConvolution;
  int max_degree = 8;
  ModelOptions model;
  // Quadrature mode: Gauss-Laguerre nodes over the slope variable of the
  // Beckmann lobe and uniform nodes in azimuth.
  int radial_nodes = 16;
  int azimuth_nodes = 32;
};

// Renders every view. A pixel shows the texel its camera ray hits, shaded
// for the direction from that texel's surface point to the camera; pixels
// that miss the mesh are black. Mutually consistent with
// project_observations.
std::vector<Image> synth_generate(const SurfaceGeometry& geom,
                                  const EnvironmentMap& env,
                                  const MaterialTextures& truth,
                                  const std::vector<CameraView>& views,
                                  const SynthOptions& options);

using LocalLight = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// Independent reference for the reflected radiance: Gauss-Legendre by
// cos(theta) times uniform azimuth for the irradiance, and the
// Torrance-Sparrow specular integral with a Beckmann lobe written over the
// half vector,
//   K_s F(theta_o) int D(w_m) G1(w_i) G1(w_o) L(w_i) / (4 cos theta_o) dw_i,
// integrated by Gauss-Laguerre in tan^2(theta_m) / alpha^2.
Eigen::Vector3d quadrature_irradiance(const LocalLight& light, int n_theta,
                                      int n_phi);
Eigen::Vector3d quadrature_outgoing(const LocalLight& light,
                                    const TsParams& params,
                                    const Direction& wo,
                                    const Eigen::Vector3d& irradiance,
                                    const ModelOptions& options,
                                    int radial_nodes, int azimuth_nodes);

// Gauss-Laguerre nodes and weights for int_0^inf e^{-x} f(x) dx.
void gauss_laguerre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// Deterministic 64-bit generator with helpers that do not depend on the
// standard library's distribution implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Eigen::Vector3d unit_vector();

 private:
  std::uint64_t state_;
};

enum class PresetLight { kSunSky, kStudio, kOvercast, kSunset, kHalfLit };
const char* preset_light_name(PresetLight light);

EnvironmentMap make_preset_environment(PresetLight light, int height,
                                       std::uint64_t seed);

// Smoothly varying base colour and roughness with blocks of metallic;
// roughness stays in [0.45, 0.9].
MaterialTextures make_sphere_material(int width, int height,
                                      std::uint64_t seed);

// count cameras on a Fibonacci sphere of the given radius looking at the
// origin, rotated by a seed-dependent rotation.
std::vector<CameraView> make_orbit_views(int count, double distance,
                                         int image_size, double fov_radians,
                                         std::uint64_t seed);

struct SphereScene {
  int texture_size = 64;
  int image_size = 128;
  int views = 100;
  double camera_distance = 4.0;
  double fov = 0.6;
};

Mesh make_scene_sphere(const SphereScene& scene);

// Fitting scenario with 100 upper-hemisphere directions, the 12 nearest to a
// masked region removed and cosine weights on the remaining 88. The light is
// a sky gradient with three lobes, expanded up to degree 30; the outgoing
// signal is that light filtered with alpha = 0.2.
struct Figure3Scenario {
  ShExpansiond light;
  double alpha = 0.2;
  DirectionalSamples incoming;
  DirectionalSamples outgoing;
  std::vector<Direction> masked;
};
Figure3Scenario make_figure3_scenario(std::uint64_t seed = 0);

// Three spectrum pairs: a Dirac light on a glossy material, the same light
// low-pass filtered, and the Dirac light on a nearly non-specular material.
struct Figure5Case {
  std::string name;
  SpectrumPair spectra;
  double ks = 0.0;
  double alpha = 0.0;
};
std::vector<Figure5Case> make_figure5_cases(int max_degree = 8);

}  // namespace freqbrdf

#endif  // FREQBRDF_SYNTH_HPP_
