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

#ifndef FREQBRDF_BRDF_HPP_
#define FREQBRDF_BRDF_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "freqbrdf/sh.hpp"

namespace freqbrdf {

// Torrance-Sparrow parameters of the convolution model.
struct BrdfParams {
  Eigen::Vector3d kd = Eigen::Vector3d::Zero();
  double ks = 0.0;
  double alpha = 0.1;
};

struct PrincipledParams {
  Eigen::Vector3d base_color = Eigen::Vector3d::Constant(0.5);
  double metallic = 0.5;
  double roughness = 0.5;
};

// principled_to_ts output. r0 is the per-channel Fresnel reflectance at normal
// incidence.
struct TsParams {
  BrdfParams brdf;
  Eigen::Vector3d r0 = Eigen::Vector3d::Ones();
};

// Switches for the ablation variants of the forward model.
struct ModelOptions {
  bool shadowing = true;
  bool masking = true;
  bool fresnel = true;
};

// e^{-(alpha l)^2}.
template <typename Scalar>
Scalar filter_coeff(Scalar alpha, int l) {
  using std::exp;
  const Scalar al = alpha * Scalar(l);
  return exp(-al * al);
}

Eigen::VectorXd filter_kernel(double alpha, int max_degree);

// Smith G1 for the GGX distribution written in terms of cos(theta):
// 2 / (1 + sqrt(1 + alpha^2 tan^2 theta)). Zero at and beyond grazing.
template <typename Scalar>
Scalar smith_g1_cos(Scalar alpha, Scalar cos_theta) {
  using std::sqrt;
  if (!(cos_theta > Scalar(0))) return Scalar(0);
  const Scalar c2 = cos_theta * cos_theta;
  const Scalar tan2 = (Scalar(1) - c2) / c2;
  return Scalar(2) / (Scalar(1) + sqrt(Scalar(1) + alpha * alpha * tan2));
}

template <typename Scalar>
Scalar smith_g1(Scalar alpha, Scalar theta) {
  using std::cos;
  if (!(theta < Scalar(std::numbers::pi / 2))) return Scalar(0);
  return smith_g1_cos(alpha, cos(theta));
}

// d G1 / d alpha at fixed angle.
double smith_g1_dalpha(double alpha, double cos_theta);

// R0 + (1 - R0)(1 - cos theta_o)^5.
Eigen::Vector3d fresnel_schlick(const Eigen::Vector3d& r0, double theta_o);

// K_d = R_b, K_s = 1, R0 = 0.04 + (R_b - 0.04) m, alpha = r^2.
TsParams principled_to_ts(const PrincipledParams& p);

// Per-channel factor in front of the filtered light: K_s F(theta_o) with the
// Fresnel term on, K_s R0 with it off. With Fresnel off and K_s = 1 this is
// the K_s = R0 variant; with r0 = 1 it is the plain scalar K_s.
Eigen::Vector3d specular_tint(const TsParams& p, double theta_o, bool fresnel);

// Multiplies every sample by G1(alpha, theta_i).
DirectionalSamples shadow_attenuate(const DirectionalSamples& light_samples,
                                    double alpha);

// 2 pi / n * sum L cos(theta). Throws InsufficientSamples for n = 0.
Eigen::VectorXd irradiance(const DirectionalSamples& light_samples);

// Fixed hemisphere directions for incoming light together with the linear map
// from their values to a full-sphere expansion. The lower hemisphere is
// represented by zeros at the remaining points of the Fibonacci sphere.
class LightBasis {
 public:
  explicit LightBasis(int max_degree);
  LightBasis(int max_degree, int hemisphere_count);

  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(directions_.size()); }
  const std::vector<Direction>& directions() const { return directions_; }

  // values: size() x channels, sampled at directions().
  ShExpansiond project(const Eigen::MatrixXd& values) const;

 private:
  int max_degree_;
  std::vector<Direction> directions_;
  Eigen::MatrixXd projection_;
};

// Incoming light at one surface point: irradiance, the light expansion and
// the shadow-attenuated light expansion built with G1 at alpha_shadow.
class ShadingContext {
 public:
  ShadingContext() = default;
  ShadingContext(Eigen::Vector3d irradiance, ShExpansiond light,
                 ShExpansiond shadowed_light, double alpha_shadow);

  // Hemisphere samples must lie on basis.directions().
  static ShadingContext from_samples(const LightBasis& basis,
                                     const DirectionalSamples& light,
                                     double alpha_shadow);

  const Eigen::Vector3d& irradiance() const { return irradiance_; }
  const ShExpansiond& light() const { return light_; }
  const ShExpansiond& shadowed_light() const { return shadowed_light_; }
  double alpha_shadow() const { return alpha_shadow_; }
  int max_degree() const { return light_.max_degree(); }

  // Light expansion entering the convolution under the given options.
  const ShExpansiond& effective_light(const ModelOptions& options) const {
    return options.shadowing ? shadowed_light_ : light_;
  }

 private:
  Eigen::Vector3d irradiance_ = Eigen::Vector3d::Zero();
  ShExpansiond light_;
  ShExpansiond shadowed_light_;
  double alpha_shadow_ = 0.0;
};

// Coefficients of S_alpha * L that the specular lobe evaluates.
ShExpansiond specular_expansion(const ShadingContext& ctx, double alpha,
                                const ModelOptions& options);

// B(w_o) = K_d E / pi + tint(theta_o) G1(alpha, theta_o) [S_alpha * L](w_r)
// where w_r mirrors w_o about the normal. Rows follow out_dirs, columns are
// RGB. Clamped at zero.
Eigen::MatrixXd render_outgoing(const ShadingContext& ctx, const TsParams& p,
                                std::span<const Direction> out_dirs,
                                const ModelOptions& options = {});

// render_outgoing together with its derivatives. d_kd(i, c) is the
// derivative of channel c with respect to K_d,c; the shadowed expansion is
// held fixed.
struct OutgoingDerivatives {
  Eigen::MatrixXd value;
  Eigen::MatrixXd d_kd;
  Eigen::MatrixXd d_ks;
  Eigen::MatrixXd d_alpha;
};
OutgoingDerivatives render_outgoing_derivatives(
    const ShadingContext& ctx, const TsParams& p,
    std::span<const Direction> out_dirs, const ModelOptions& options = {});

}  // namespace freqbrdf

#endif  // FREQBRDF_BRDF_HPP_
