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

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace freqbrdf {
namespace {

using testing::kPi;

TEST(FilterTest, GaussianInDegree) {
  EXPECT_DOUBLE_EQ(filter_coeff(0.3, 0), 1.0);
  EXPECT_NEAR(filter_coeff(0.2, 5), std::exp(-1.0), 1e-15);
  const Eigen::VectorXd k = filter_kernel(0.1, 8);
  ASSERT_EQ(k.size(), 9);
  for (int l = 1; l <= 8; ++l) EXPECT_LT(k(l), k(l - 1));
}

TEST(SmithTest, LimitsAndSymmetry) {
  EXPECT_DOUBLE_EQ(smith_g1(0.5, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(smith_g1(0.5, kPi / 2), 0.0);
  EXPECT_DOUBLE_EQ(smith_g1(0.5, 2.0), 0.0);
  EXPECT_NEAR(smith_g1(1e-9, 1.4), 1.0, 1e-12);
  // Rougher surfaces mask more at a fixed angle.
  EXPECT_GT(smith_g1(0.2, 1.2), smith_g1(0.6, 1.2));
  const double a = 0.4, t = 1.1;
  const double tan_t = std::tan(t);
  EXPECT_NEAR(smith_g1(a, t),
              2.0 / (1.0 + std::sqrt(1.0 + a * a * tan_t * tan_t)), 1e-14);
}

TEST(SmithTest, AlphaDerivativeMatchesCentralDifference) {
  for (double a : {0.05, 0.3, 0.8}) {
    for (double c : {0.1, 0.5, 0.95}) {
      const double h = 1e-6;
      const double fd =
          (smith_g1_cos(a + h, c) - smith_g1_cos(a - h, c)) / (2 * h);
      EXPECT_NEAR(smith_g1_dalpha(a, c), fd, 1e-7);
    }
  }
}

TEST(FresnelTest, SchlickEndpoints) {
  const Eigen::Vector3d r0(0.04, 0.5, 0.9);
  EXPECT_TRUE(fresnel_schlick(r0, 0.0).isApprox(r0));
  EXPECT_TRUE(fresnel_schlick(r0, kPi / 2).isApprox(Eigen::Vector3d::Ones()));
}

TEST(PrincipledTest, MappingToTorranceSparrow) {
  PrincipledParams p;
  p.base_color = Eigen::Vector3d(0.2, 0.4, 0.6);
  p.metallic = 0.0;
  p.roughness = 0.5;
  TsParams t = principled_to_ts(p);
  EXPECT_TRUE(t.brdf.kd.isApprox(p.base_color));
  EXPECT_DOUBLE_EQ(t.brdf.ks, 1.0);
  EXPECT_DOUBLE_EQ(t.brdf.alpha, 0.25);
  EXPECT_TRUE(t.r0.isApprox(Eigen::Vector3d::Constant(0.04)));
  p.metallic = 1.0;
  t = principled_to_ts(p);
  EXPECT_TRUE(t.r0.isApprox(p.base_color));
  // Without Fresnel the tint is K_s R0.
  EXPECT_TRUE(specular_tint(t, 0.7, false).isApprox(p.base_color));
}

TEST(IrradianceTest, ConstantLightGivesPi) {
  const std::vector<Direction> dirs = fibonacci_hemisphere(400);
  const DirectionalSamples s(dirs, Eigen::MatrixXd::Ones(400, 3));
  const Eigen::VectorXd e = irradiance(s);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(e(c), kPi, 0.01 * kPi);
  EXPECT_THROW(irradiance(DirectionalSamples()), InsufficientSamples);
}

TEST(LightBasisTest, ProjectsBandlimitedUpperHemisphereSignal) {
  // A signal that vanishes on the lower hemisphere is only approximately
  // bandlimited; a polynomial in z times z^4 keeps the cut smooth.
  const LightBasis basis(8);
  EXPECT_EQ(basis.size(), 4 * 81);
  Eigen::MatrixXd v(basis.size(), 1);
  for (int i = 0; i < basis.size(); ++i) {
    const double z = std::cos(basis.directions()[i].theta);
    v(i, 0) = std::pow(z, 4);
  }
  const ShExpansiond e = basis.project(v);
  for (const Direction& d : fibonacci_hemisphere(50)) {
    const double z = std::cos(d.theta);
    EXPECT_NEAR(e.evaluate(d)(0), std::pow(z, 4), 0.03);
  }
}

ShadingContext smooth_context(double alpha_shadow) {
  const LightBasis basis(8);
  Eigen::MatrixXd v(basis.size(), 3);
  for (int i = 0; i < basis.size(); ++i) {
    const Eigen::Vector3d d = to_vector(basis.directions()[i]);
    const double base = std::pow(d.z(), 4) * (1.0 + 0.5 * d.x());
    v.row(i) << base, 0.8 * base, 0.5 * base + 0.1 * d.z();
  }
  return ShadingContext::from_samples(basis, DirectionalSamples(
      basis.directions(), v), alpha_shadow);
}

TEST(RenderTest, PureDiffuseIsViewIndependent) {
  const ShadingContext ctx = smooth_context(0.1);
  TsParams p;
  p.brdf.kd = Eigen::Vector3d(0.3, 0.5, 0.7);
  p.brdf.ks = 0.0;
  const std::vector<Direction> dirs = fibonacci_hemisphere(30);
  const Eigen::MatrixXd b = render_outgoing(ctx, p, dirs);
  const Eigen::Vector3d expected =
      p.brdf.kd.cwiseProduct(ctx.irradiance()) / kPi;
  for (int i = 0; i < b.rows(); ++i) {
    EXPECT_TRUE(b.row(i).transpose().isApprox(expected, 1e-12));
  }
}

TEST(RenderTest, SpecularLobeFollowsMirrorDirection) {
  // Light = single Y00 + Y10 expansion: the lobe evaluates it at the mirror
  // of w_o, so theta_o = 0 sees the light straight above.
  ShExpansiond light(8, 3);
  light.coeffs().row(0).setConstant(1.0);
  light.coeffs().row(sh_index(1, 0)).setConstant(0.5);
  const ShadingContext ctx(Eigen::Vector3d::Zero(), light, light, 0.0);
  TsParams p;
  p.brdf.ks = 1.0;
  p.brdf.alpha = 0.0;
  p.r0 = Eigen::Vector3d::Ones();
  ModelOptions o;
  o.fresnel = false;
  o.masking = false;
  const std::vector<Direction> dirs{{0.0, 0.0}, {1.0, 0.3}};
  const Eigen::MatrixXd b = render_outgoing(ctx, p, dirs, o);
  for (int i = 0; i < 2; ++i) {
    const Direction r = reflect_about_normal(dirs[i]);
    EXPECT_NEAR(b(i, 0), light.evaluate(r)(0), 1e-12);
  }
}

TEST(RenderTest, DerivativesMatchCentralDifferences) {
  const ShadingContext ctx = smooth_context(0.2);
  TsParams p;
  p.brdf.kd = Eigen::Vector3d(0.3, 0.5, 0.2);
  p.brdf.ks = 0.7;
  p.brdf.alpha = 0.25;
  p.r0 = Eigen::Vector3d(0.3, 0.2, 0.1);
  const std::vector<Direction> dirs{{0.2, 0.1}, {0.8, 2.0}, {1.3, 4.0}};
  const OutgoingDerivatives d = render_outgoing_derivatives(ctx, p, dirs);
  EXPECT_TRUE(d.value.isApprox(render_outgoing(ctx, p, dirs), 1e-14));
  const double h = 1e-6;
  auto fd = [&](auto mutate) {
    TsParams a = p, b = p;
    mutate(a, h);
    mutate(b, -h);
    return Eigen::MatrixXd((render_outgoing(ctx, a, dirs) -
                            render_outgoing(ctx, b, dirs)) /
                           (2 * h));
  };
  const Eigen::MatrixXd d_ks =
      fd([](TsParams& t, double e) { t.brdf.ks += e; });
  const Eigen::MatrixXd d_alpha =
      fd([](TsParams& t, double e) { t.brdf.alpha += e; });
  EXPECT_LT((d_ks - d.d_ks).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((d_alpha - d.d_alpha).cwiseAbs().maxCoeff(), 1e-6);
  for (int c = 0; c < 3; ++c) {
    const Eigen::MatrixXd d_kd = fd([c](TsParams& t, double e) {
      t.brdf.kd(c) += e;
    });
    EXPECT_LT((d_kd.col(c) - d.d_kd.col(c)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(RenderTest, ShadowingAttenuatesGrazingLight) {
  const std::vector<Direction> dirs{{0.1, 0.0}, {1.5, 0.0}};
  const DirectionalSamples s(dirs, Eigen::MatrixXd::Ones(2, 1));
  const DirectionalSamples a = shadow_attenuate(s, 0.5);
  EXPECT_NEAR(a.values(0, 0), smith_g1(0.5, 0.1), 1e-15);
  EXPECT_LT(a.values(1, 0), a.values(0, 0));
}

}  // namespace
}  // namespace freqbrdf
