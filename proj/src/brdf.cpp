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

#include "freqbrdf/brdf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::VectorXd filter_kernel(double alpha, int max_degree) {
  Eigen::VectorXd k(max_degree + 1);
  for (int l = 0; l <= max_degree; ++l) k(l) = filter_coeff(alpha, l);
  return k;
}

double smith_g1_dalpha(double alpha, double cos_theta) {
  if (!(cos_theta > 0.0)) return 0.0;
  const double c2 = cos_theta * cos_theta;
  const double tan2 = (1.0 - c2) / c2;
  const double s = std::sqrt(1.0 + alpha * alpha * tan2);
  return -2.0 / ((1.0 + s) * (1.0 + s)) * (alpha * tan2 / s);
}

Eigen::Vector3d fresnel_schlick(const Eigen::Vector3d& r0, double theta_o) {
  const double c = std::cos(std::clamp(theta_o, 0.0, kPi / 2));
  const double f = std::pow(std::max(0.0, 1.0 - c), 5.0);
  return r0 + (Eigen::Vector3d::Ones() - r0) * f;
}

TsParams principled_to_ts(const PrincipledParams& p) {
  TsParams t;
  t.brdf.kd = p.base_color;
  t.brdf.ks = 1.0;
  t.brdf.alpha = p.roughness * p.roughness;
  t.r0 = Eigen::Vector3d::Constant(0.04) +
         (p.base_color - Eigen::Vector3d::Constant(0.04)) * p.metallic;
  return t;
}

Eigen::Vector3d specular_tint(const TsParams& p, double theta_o,
                              bool fresnel) {
  return p.brdf.ks * (fresnel ? fresnel_schlick(p.r0, theta_o) : p.r0);
}

DirectionalSamples shadow_attenuate(const DirectionalSamples& light_samples,
                                    double alpha) {
  DirectionalSamples out = light_samples;
  for (int i = 0; i < out.size(); ++i) {
    out.values.row(i) *= smith_g1(alpha, out.directions[i].theta);
  }
  return out;
}

Eigen::VectorXd irradiance(const DirectionalSamples& light_samples) {
  const int n = light_samples.size();
  if (n == 0) throw InsufficientSamples("irradiance needs light samples");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(light_samples.channels());
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(light_samples.directions[i].theta);
    if (c > 0.0) e += c * light_samples.values.row(i).transpose();
  }
  return e * (2.0 * kPi / n);
}

LightBasis::LightBasis(int max_degree)
    : LightBasis(max_degree, 4 * sh_count(max_degree)) {}

LightBasis::LightBasis(int max_degree, int hemisphere_count)
    : max_degree_(max_degree) {
  const std::vector<Direction> sphere = fibonacci_sphere(2 * hemisphere_count);
  ShFitter fitter(sphere, Eigen::VectorXd::Ones(2 * hemisphere_count),
                  max_degree, 0.0);
  projection_ = fitter.projection_matrix().leftCols(hemisphere_count);
  directions_.assign(sphere.begin(), sphere.begin() + hemisphere_count);
}

ShExpansiond LightBasis::project(const Eigen::MatrixXd& values) const {
  if (values.rows() != size()) {
    throw InvalidInput("light values must match the light basis directions");
  }
  return ShExpansiond(max_degree_, projection_ * values);
}

ShadingContext::ShadingContext(Eigen::Vector3d irradiance, ShExpansiond light,
                               ShExpansiond shadowed_light,
                               double alpha_shadow)
    : irradiance_(std::move(irradiance)),
      light_(std::move(light)),
      shadowed_light_(std::move(shadowed_light)),
      alpha_shadow_(alpha_shadow) {
  if (light_.max_degree() != shadowed_light_.max_degree()) {
    throw InvalidInput("light expansions must share max_degree");
  }
  if ((irradiance_.array() < 0.0).any()) {
    throw InvalidInput("irradiance must be non-negative");
  }
}

ShadingContext ShadingContext::from_samples(const LightBasis& basis,
                                            const DirectionalSamples& light,
                                            double alpha_shadow) {
  if (light.channels() != 3) throw InvalidInput("light must be RGB");
  const Eigen::Vector3d e = freqbrdf::irradiance(light);
  return ShadingContext(
      e, basis.project(light.values),
      basis.project(shadow_attenuate(light, alpha_shadow).values),
      alpha_shadow);
}

ShExpansiond specular_expansion(const ShadingContext& ctx, double alpha,
                                const ModelOptions& options) {
  return convolve_isotropic(ctx.effective_light(options),
                            filter_kernel(alpha, ctx.max_degree()));
}

OutgoingDerivatives render_outgoing_derivatives(
    const ShadingContext& ctx, const TsParams& p,
    std::span<const Direction> out_dirs, const ModelOptions& options) {
  const int n = static_cast<int>(out_dirs.size());
  const int lmax = ctx.max_degree();
  const ShExpansiond& light = ctx.effective_light(options);
  const double alpha = p.brdf.alpha;
  const Eigen::VectorXd k = filter_kernel(alpha, lmax);

  OutgoingDerivatives out;
  out.value.resize(n, 3);
  out.d_kd.resize(n, 3);
  out.d_ks.resize(n, 3);
  out.d_alpha.resize(n, 3);

  const Eigen::Vector3d diffuse_rate = ctx.irradiance() / kPi;
  Eigen::VectorXd y(sh_count(lmax));
  for (int i = 0; i < n; ++i) {
    const Direction& wo = out_dirs[i];
    eval_sh_basis<double>(to_vector(reflect_about_normal(wo)), lmax,
                          y.data());
    Eigen::Vector3d spec = Eigen::Vector3d::Zero();
    Eigen::Vector3d dspec = Eigen::Vector3d::Zero();
    for (int l = 0; l <= lmax; ++l) {
      const Eigen::Vector3d proj =
          light.coeffs()
              .middleRows(sh_index(l, -l), 2 * l + 1)
              .transpose() *
          y.segment(sh_index(l, -l), 2 * l + 1);
      spec += k(l) * proj;
      dspec += (-2.0 * alpha * l * l * k(l)) * proj;
    }
    const double cos_o = std::cos(wo.theta);
    const double mask = options.masking ? smith_g1_cos(alpha, cos_o) : 1.0;
    const double dmask =
        options.masking ? smith_g1_dalpha(alpha, cos_o) : 0.0;
    TsParams unit = p;
    unit.brdf.ks = 1.0;
    const Eigen::Vector3d tint = specular_tint(unit, wo.theta, options.fresnel);
    for (int c = 0; c < 3; ++c) {
      const double b = p.brdf.kd(c) * diffuse_rate(c) +
                       p.brdf.ks * tint(c) * mask * spec(c);
      if (b > 0.0) {
        out.value(i, c) = b;
        out.d_kd(i, c) = diffuse_rate(c);
        out.d_ks(i, c) = tint(c) * mask * spec(c);
        out.d_alpha(i, c) =
            p.brdf.ks * tint(c) * (dmask * spec(c) + mask * dspec(c));
      } else {
        out.value(i, c) = 0.0;
        out.d_kd(i, c) = out.d_ks(i, c) = out.d_alpha(i, c) = 0.0;
      }
    }
  }
  return out;
}

Eigen::MatrixXd render_outgoing(const ShadingContext& ctx, const TsParams& p,
                                std::span<const Direction> out_dirs,
                                const ModelOptions& options) {
  return render_outgoing_derivatives(ctx, p, out_dirs, options).value;
}

}  // namespace freqbrdf
