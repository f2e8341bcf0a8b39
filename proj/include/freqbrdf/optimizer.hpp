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

#ifndef FREQBRDF_OPTIMIZER_HPP_
#define FREQBRDF_OPTIMIZER_HPP_

#include <vector>

#include <Eigen/Core>

#include "freqbrdf/brdf.hpp"
#include "freqbrdf/sh.hpp"
#include "freqbrdf/spectrum.hpp"

namespace freqbrdf {

struct OptimizerConfig {
  int iterations = 200;
  double step = 3e-2;
  int shadow_refresh = 10;
  double tv_weight = 1e-3;
  double weight_a = 1.0;
  double weight_b = 1.0;
  int max_degree = 8;
  double lambda = 1e-4;
  GridConfig grid;
  ModelOptions model;
  // Attenuates degrees the sample count cannot resolve before the spectra
  // are compared (see bandlimit_prefilter).
  bool prefilter = true;

  // Throws InvalidInput on out-of-range values.
  void validate() const;
};

// max(0, 1 - (1 - cos(a theta))^b), zero beyond grazing.
double sample_weight(double theta, double a, double b);

// Observations and state of one texel. frame holds the tangent, bitangent
// and normal as columns, in world space.
struct TexelRecord {
  int u = 0;
  int v = 0;
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  DirectionalSamples samples;
  ShadingContext light;
  PrincipledParams params;
  double entropy = 1.0;
  bool valid = false;
};

// Row-major texel grid; texel (u, v) lives at index v * width + u.
struct TexelGrid {
  int width = 0;
  int height = 0;
  std::vector<TexelRecord> texels;

  TexelRecord& at(int u, int v) {
    return texels[static_cast<std::size_t>(v) * width + u];
  }
  const TexelRecord& at(int u, int v) const {
    return texels[static_cast<std::size_t>(v) * width + u];
  }
};

// Distant light seen from a texel.
class IncomingLight {
 public:
  virtual ~IncomingLight() = default;
  virtual Eigen::Vector3d radiance(const TexelRecord& texel,
                                   const Eigen::Vector3d& local_dir) const = 0;
};

DirectionalSamples sample_light(const IncomingLight& light,
                                const TexelRecord& texel,
                                const std::vector<Direction>& dirs);

// Builds every texel's shading context with shadowing evaluated at
// alpha_shadow (or at the texel's current roughness squared when negative)
// and sets the validity flag.
void build_shading(TexelGrid& grid, const IncomingLight& light,
                   const LightBasis& basis, double alpha_shadow = -1.0);

struct InitResult {
  PrincipledParams params;
  double entropy = 1.0;
  bool valid = false;
  PosteriorGrid posterior;
};

// Spectral initialization of one texel. Texels without observations or
// irradiance get the prior mean, H = 1 and valid = false.
InitResult init_from_spectrum(const TexelRecord& record,
                              const IncomingLight& light,
                              const OptimizerConfig& config);

// Runs init_from_spectrum on every texel and stores the results.
void initialize_from_spectrum(TexelGrid& grid, const IncomingLight& light,
                              const OptimizerConfig& config);

// Metallic from a specular estimate: clamp((K_s - 0.04) /
// (max_c R_b - 0.04), 0, 1), zero when max_c R_b <= 0.04.
double metallic_from_specular(double ks, const Eigen::Vector3d& base_color);

// Loss of the mixed pipeline over all valid texels:
//   (1 / N_obs) sum w sqrt(d^2 + eps^2) + tv_weight / N_valid TV
// with parameters packed as (R_b, m, r) per valid texel. Shadowing uses the
// expansions cached by refresh(), so the gradient treats them as constants.
class MixedLoss {
 public:
  MixedLoss(const TexelGrid& grid, const OptimizerConfig& config);

  int parameter_count() const { return 5 * static_cast<int>(valid_.size()); }
  Eigen::VectorXd pack(const TexelGrid& grid) const;
  void unpack(const Eigen::VectorXd& x, TexelGrid& grid) const;

  // Caches the per-degree light projections from the grid's shading
  // contexts.
  void refresh(const TexelGrid& grid);

  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* gradient) const;

  static constexpr double kEpsilon = 1e-6;

 private:
  struct Work {
    Eigen::VectorXd cos_o;
    Eigen::VectorXd fresnel_power;  // (1 - cos theta_o)^5
    Eigen::VectorXd weight;
    Eigen::MatrixXd observed;  // n x 3
    Eigen::MatrixXd proj;      // n x 3 (l* + 1), column 3 l + c
    Eigen::Vector3d irradiance;
  };

  double texel_loss(int k, const double* p, double* g) const;

  OptimizerConfig config_;
  int width_ = 0;
  int height_ = 0;
  std::vector<int> valid_;      // grid index per valid texel
  std::vector<int> slot_;       // valid slot per grid index, -1 if invalid
  std::vector<Work> work_;
  double observation_count_ = 0.0;
};

struct OptimizeReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

// Adam with a cosine-annealed step and projection onto [0, 1]. Shadowing is
// refreshed from the current roughness every shadow_refresh iterations. The
// returned parameters are the best iterate, so final_loss <= initial_loss.
// Throws NonFiniteLoss when the loss stops being finite.
OptimizeReport optimize(TexelGrid& grid, const IncomingLight& light,
                        const LightBasis& basis,
                        const OptimizerConfig& config);

// Multiplies coefficients by e^{-(alpha' l)^2} with alpha' = n^{-1/2}.
ShExpansiond bandlimit_prefilter(const ShExpansiond& env, int n_views);

// alpha' = sqrt(-ln t) / floor(sqrt(n)).
double alpha_lower_bound(int n_views, double t);

// Inverse rule: views needed to resolve alpha at threshold t,
// ceil(-ln t / alpha^2).
int views_for_alpha(double alpha, double t);

}  // namespace freqbrdf

#endif  // FREQBRDF_OPTIMIZER_HPP_
