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

#include "freqbrdf/optimizer.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "freqbrdf/environment.hpp"
#include "freqbrdf/pipeline.hpp"
#include "freqbrdf/synth.hpp"
#include "test_util.hpp"

namespace freqbrdf {
namespace {

using testing::kPi;

TEST(SampleWeightTest, Examples) {
  EXPECT_DOUBLE_EQ(sample_weight(0.0, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(sample_weight(0.0, 2.0, 3.0), 1.0);
  for (double t : {0.2, 0.7, 1.2}) {
    EXPECT_NEAR(sample_weight(t, 1.0, 1.0), std::cos(t), 1e-15);
  }
  EXPECT_EQ(sample_weight(1.7, 1.0, 1.0), 0.0);
  EXPECT_NEAR(sample_weight(kPi / 3, 1.0, 2.0), 0.75, 1e-15);
}

TEST(SamplingBoundTest, Examples) {
  EXPECT_NEAR(alpha_lower_bound(100, std::exp(-1.0)), 0.1, 1e-15);
  EXPECT_NEAR(alpha_lower_bound(400, 0.5), std::sqrt(std::log(2.0)) / 20,
              1e-15);
  EXPECT_NEAR(alpha_lower_bound(400, 0.5), 0.0416, 1e-4);
  EXPECT_EQ(views_for_alpha(0.1, std::exp(-1.0)), 100);
  EXPECT_THROW(alpha_lower_bound(0, 0.5), InvalidInput);
  EXPECT_THROW(alpha_lower_bound(10, 1.0), InvalidInput);
}

TEST(PrefilterTest, Examples) {
  const ShExpansiond e = testing::random_expansion(8, 1, 4);
  const ShExpansiond f = bandlimit_prefilter(e, 25);
  EXPECT_NEAR(f(5, 2), e(5, 2) * std::exp(-1.0), 1e-15);
  const ShExpansiond g = bandlimit_prefilter(e, 1000000);
  EXPECT_LT((g.coeffs() - e.coeffs()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(ConfigTest, ValidateRejectsOutOfRange) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.shadow_refresh = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = OptimizerConfig{};
  c.tv_weight = -1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = OptimizerConfig{};
  c.max_degree = 25;
  EXPECT_THROW(c.validate(), InvalidInput);
}

class OptimizerSceneTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    truth_ = new MaterialTextures(make_sphere_material(24, 24, 3));
    testing::SmallSceneOptions o;
    scene_ = new Scene(testing::make_small_scene(o, *truth_));
  }
  static void TearDownTestSuite() {
    delete scene_;
    delete truth_;
  }

  static TexelGrid grid(const FitConfig& config) {
    return prepare_grid(*scene_, config);
  }

  static MaterialTextures* truth_;
  static Scene* scene_;
};

MaterialTextures* OptimizerSceneTest::truth_ = nullptr;
Scene* OptimizerSceneTest::scene_ = nullptr;

TEST_F(OptimizerSceneTest, GradientMatchesCentralDifferences) {
  FitConfig config;
  TexelGrid g = grid(config);
  const MixedLoss loss(g, config.optimizer);
  ASSERT_GT(loss.parameter_count(), 0);
  SplitMix64 rng(17);
  for (int state = 0; state < 10; ++state) {
    Eigen::VectorXd x(loss.parameter_count());
    for (int i = 0; i < x.size(); ++i) x(i) = rng.uniform(0.05, 0.95);
    Eigen::VectorXd grad;
    loss.evaluate(x, &grad);
    for (int k = 0; k < 40; ++k) {
      const int i = static_cast<int>(rng.next() % x.size());
      const double h = 1e-5;
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const double fd =
          (loss.evaluate(xp, nullptr) - loss.evaluate(xm, nullptr)) / (2 * h);
      EXPECT_LE(std::abs(fd - grad(i)),
                1e-4 * std::max(std::abs(fd), std::abs(grad(i))) + 1e-12)
          << "state " << state << " index " << i;
    }
  }
}

TEST_F(OptimizerSceneTest, GroundTruthOfConsistentDataIsStationary) {
  FitConfig config;
  TexelGrid g = grid(config);
  // Replace the observations by the model's own prediction at the truth.
  for (std::size_t i = 0; i < g.texels.size(); ++i) {
    TexelRecord& t = g.texels[i];
    t.params = truth_->params[i];
    if (t.samples.directions.empty()) continue;
    const double r = t.params.roughness;
    const EnvironmentLight light(scene_->env);
    const LightBasis basis(config.optimizer.max_degree);
    t.light = ShadingContext::from_samples(
        basis, sample_light(light, t, basis.directions()), r * r);
    t.samples.values = render_outgoing(t.light, principled_to_ts(t.params),
                                       t.samples.directions, config.optimizer.model);
    t.valid = true;
  }
  OptimizerConfig oc = config.optimizer;
  oc.iterations = 50;
  oc.tv_weight = 0.0;
  const TexelGrid before = g;
  optimize(g, EnvironmentLight(scene_->env), LightBasis(oc.max_degree), oc);
  double moved = 0.0;
  for (std::size_t i = 0; i < g.texels.size(); ++i) {
    const PrincipledParams& a = before.texels[i].params;
    const PrincipledParams& b = g.texels[i].params;
    moved = std::max({moved, (a.base_color - b.base_color).cwiseAbs().maxCoeff(),
                      std::abs(a.metallic - b.metallic),
                      std::abs(a.roughness - b.roughness)});
  }
  EXPECT_LT(moved, 1e-3);
}

TEST_F(OptimizerSceneTest, FinalLossNotAboveInitialAndDeterministic) {
  FitConfig config;
  config.optimizer.iterations = 40;
  const FitResult a = run_fit(*scene_, config);
  const FitResult b = run_fit(*scene_, config);
  EXPECT_LE(a.report.final_loss, a.report.initial_loss);
  EXPECT_EQ(a.report.final_loss, b.report.final_loss);
  for (std::size_t i = 0; i < a.textures.params.size(); ++i) {
    EXPECT_EQ(a.textures.params[i].roughness, b.textures.params[i].roughness);
    EXPECT_EQ(a.textures.params[i].base_color, b.textures.params[i].base_color);
  }
}

TEST_F(OptimizerSceneTest, OptimizationImprovesOnSpectrumEstimate) {
  FitConfig config;
  config.spectrum_only = true;
  const double spectrum = parameter_mse(run_fit(*scene_, config).textures,
                                        *truth_);
  config.spectrum_only = false;
  const double optimized = parameter_mse(run_fit(*scene_, config).textures,
                                         *truth_);
  EXPECT_LT(optimized, spectrum);
  EXPECT_LE(optimized, 0.05);
}

TEST_F(OptimizerSceneTest, ShadowRefreshScheduleIsRobust) {
  FitConfig config;
  config.optimizer.shadow_refresh = 10;
  const double m10 =
      parameter_mse(run_fit(*scene_, config).textures, *truth_);
  config.optimizer.shadow_refresh = 1;
  const double m1 = parameter_mse(run_fit(*scene_, config).textures, *truth_);
  EXPECT_LT(std::abs(m1 - m10), 0.01);
}

TEST_F(OptimizerSceneTest, DominantTotalVariationFlattensTextures) {
  FitConfig config;
  config.optimizer.tv_weight = 1e4;
  config.optimizer.iterations = 300;
  const FitResult r = run_fit(*scene_, config);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < r.textures.params.size(); ++i) {
    if (!r.textures.valid[i]) continue;
    lo = std::min(lo, r.textures.params[i].roughness);
    hi = std::max(hi, r.textures.params[i].roughness);
  }
  EXPECT_LT(hi - lo, 1e-3);
}

TEST_F(OptimizerSceneTest, NonFiniteObservationAborts) {
  FitConfig config;
  TexelGrid g = grid(config);
  for (TexelRecord& t : g.texels) {
    if (t.valid) {
      t.samples.values(0, 0) = std::numeric_limits<double>::quiet_NaN();
      break;
    }
  }
  EXPECT_THROW(optimize(g, EnvironmentLight(scene_->env),
                        LightBasis(config.optimizer.max_degree),
                        config.optimizer),
               NonFiniteLoss);
}

TEST(InitTest, ZeroObservationsGivePriorMean) {
  const EnvironmentMap env =
      make_environment(8, [](const Eigen::Vector3d&) {
        return Eigen::Vector3d::Ones();
      });
  TexelRecord t;
  const InitResult r =
      init_from_spectrum(t, EnvironmentLight(env), OptimizerConfig{});
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.entropy, 1.0);
  EXPECT_EQ(r.params.roughness, 0.5);
  EXPECT_EQ(r.params.metallic, 0.5);
  EXPECT_TRUE(r.params.base_color.isApprox(Eigen::Vector3d::Constant(0.5)));
}

// Outgoing radiance synthesized through the lightweight spectral model with
// the principled mapping's K_s = 1, under a band-limited light whose
// spectrum does not decay with degree. K_s = 1 sits half a cell above the
// top of a 10-cell K_s grid, and that offset maps one to one onto R_b, so the
// grid is refined to 20 cells.
TEST(InitTest, RecoversDielectricUnderHighFrequencyLight) {
  OptimizerConfig config;
  config.grid.n_ks = 20;
  const int degree = config.max_degree;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    ShExpansiond sky = testing::random_expansion(degree, 3, seed);
    sky.coeffs().row(0).array() += 12.0;
    const EnvironmentMap env =
        make_environment(256, [&](const Eigen::Vector3d& v) {
          return Eigen::Vector3d(
              sky.evaluate(direction_from_vector(v)).transpose());
        });
    const EnvironmentLight light(env);
    PrincipledParams truth;
    truth.base_color = Eigen::Vector3d::Constant(0.6);
    truth.metallic = 0.0;
    truth.roughness = 0.45;
    const TsParams ts = principled_to_ts(truth);
    ASSERT_EQ(ts.brdf.ks, 1.0);

    TexelRecord t;
    const LightBasis basis(degree);
    t.light = ShadingContext::from_samples(
        basis, sample_light(light, t, basis.directions()), ts.brdf.alpha);
    const ShExpansiond specular =
        convolve_isotropic(sky, filter_kernel(ts.brdf.alpha, degree));
    const std::vector<Direction> out = fibonacci_hemisphere(400);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(out.size()), 3);
    for (std::size_t i = 0; i < out.size(); ++i) {
      values.row(static_cast<Eigen::Index>(i)) =
          (ts.brdf.kd.cwiseProduct(t.light.irradiance()) / kPi).transpose() +
          ts.brdf.ks * specular.evaluate(reflect_about_normal(out[i]));
    }
    t.samples = DirectionalSamples(out, values);

    const InitResult r = init_from_spectrum(t, light, config);
    EXPECT_TRUE(r.valid);
    EXPECT_NEAR(r.params.roughness, 0.45, 0.1) << "seed " << seed;
    EXPECT_LT((r.params.base_color.array() - 0.6).abs().maxCoeff(), 0.05)
        << "seed " << seed;
  }
}

}  // namespace
}  // namespace freqbrdf
