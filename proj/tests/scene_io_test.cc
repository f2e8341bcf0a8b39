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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "freqbrdf/camera.hpp"
#include "freqbrdf/environment.hpp"
#include "freqbrdf/error.hpp"
#include "freqbrdf/geometry.hpp"
#include "freqbrdf/image.hpp"
#include "freqbrdf/pipeline.hpp"
#include "freqbrdf/projection.hpp"
#include "freqbrdf/synth.hpp"
#include "freqbrdf/textures.hpp"
#include "test_util.hpp"

namespace freqbrdf {
namespace {

namespace fs = std::filesystem;
using testing::kPi;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("freqbrdf_test_" + std::to_string(::testing::UnitTest::GetInstance()
                                                    ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()
                       ->current_test_info()
                       ->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

Image random_image(int w, int h, int c, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Image img(w, h, c);
  for (float& v : img.data) v = static_cast<float>(rng.uniform(0.0, 8.0));
  return img;
}

// Environment

TEST(EnvironmentTest, ConstantMapIsUniform) {
  TempDir dir;
  write_exr(dir.file("env.exr"), Image(2, 1, 3, 1.0f));
  const EnvironmentMap env = load_environment(dir.file("env.exr"));
  SplitMix64 rng(1);
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(env.lookup(rng.unit_vector()).isApprox(
        Eigen::Vector3d::Ones(), 1e-12));
  }
}

TEST(EnvironmentTest, RoundTripIsBitwise) {
  TempDir dir;
  const Image img = random_image(32, 16, 3, 2);
  save_environment(dir.file("env.exr"), EnvironmentMap(img));
  const EnvironmentMap env = load_environment(dir.file("env.exr"));
  ASSERT_EQ(env.image().data.size(), img.data.size());
  EXPECT_EQ(env.image().data, img.data);
}

TEST(EnvironmentTest, RejectsNonFiniteAndBadAspect) {
  Image img(8, 4, 3, 1.0f);
  img.at(3, 2, 1) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(EnvironmentMap{img}, InvalidInput);
  TempDir dir;
  write_exr(dir.file("nan.exr"), img);
  EXPECT_THROW(load_environment(dir.file("nan.exr")), InvalidInput);
  EXPECT_THROW(EnvironmentMap(Image(8, 8, 3, 1.0f)), InvalidInput);
}

TEST(EnvironmentTest, ClampsNegativeRadiance) {
  Image img(8, 4, 3, 1.0f);
  img.at(0, 0, 0) = -2.0f;
  img.at(5, 3, 2) = -0.5f;
  const EnvironmentMap env(img);
  EXPECT_EQ(env.clamped_pixels(), 2);
  EXPECT_EQ(env.image().at(0, 0, 0), 0.0f);
}

TEST(EnvironmentTest, RejectsLowDynamicRangeAndUnknownFormats) {
  TempDir dir;
  write_png_srgb(dir.file("env.png"), Image(8, 4, 3, 0.5f));
  EXPECT_THROW(load_environment(dir.file("env.png")), NonHdrInput);
  std::ofstream(dir.file("env.txt")) << "not an image at all";
  EXPECT_THROW(load_environment(dir.file("env.txt")), UnsupportedFormat);
  EXPECT_THROW(load_environment(dir.file("missing.exr")), IoFailure);
}

TEST(SampleIncomingTest, ConstantEnvironment) {
  const EnvironmentMap env = make_environment(
      32, [](const Eigen::Vector3d&) { return Eigen::Vector3d(0.3, 1, 2); });
  const Eigen::Matrix3d frame =
      frisvad_frame(Eigen::Vector3d(0.2, -0.4, 0.9).normalized());
  const DirectionalSamples s = sample_incoming(env, frame, 200);
  ASSERT_EQ(s.size(), 200);
  for (int i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s.values(i, 0), 0.3, 1e-6);
    EXPECT_NEAR(s.values(i, 2), 2.0, 1e-6);
    EXPECT_GT(s.directions[i].theta, 0.0);
    EXPECT_LT(s.directions[i].theta, kPi / 2);
  }
  EXPECT_NEAR(irradiance(s)(1), kPi, 0.02 * kPi);
}

TEST(SampleIncomingTest, LightBelowThePlaneIsInvisible) {
  // Rows straddling the horizon are kept dark so bilinear lookups near the
  // horizon stay exact.
  const EnvironmentMap env = make_environment(64, [](const Eigen::Vector3d& v) {
    return v.z() < -0.1 ? Eigen::Vector3d::Constant(5.0)
                        : Eigen::Vector3d::Zero();
  });
  const DirectionalSamples s =
      sample_incoming(env, Eigen::Matrix3d::Identity(), 300);
  EXPECT_EQ(s.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SampleIncomingTest, RotatingFrameMatchesRotatingEnvironment) {
  const int h = 32, w = 64, shift = 5;
  const EnvironmentMap env(random_image(w, h, 3, 7));
  Image shifted(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      shifted.set_rgb(x, y, env.image().rgb((x + shift) % w, y));
    }
  }
  const EnvironmentMap env2(shifted);
  const double delta = 2.0 * kPi * shift / w;
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(delta, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Eigen::Matrix3d frame =
      frisvad_frame(Eigen::Vector3d(0.3, 0.1, 0.8).normalized());
  const DirectionalSamples a = sample_incoming(env, rz * frame, 150);
  const DirectionalSamples b = sample_incoming(env2, frame, 150);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-6);
}

// Cameras and meshes

TEST(CameraTest, JsonRoundTrip) {
  TempDir dir;
  std::vector<CameraView> views = make_orbit_views(6, 3.0, 32, 0.7, 4);
  Intrinsics ortho;
  ortho.projection = Projection::kOrthographic;
  ortho.fx = ortho.fy = 20.0;
  ortho.width = 40;
  ortho.height = 30;
  ortho.cx = 20.0;
  ortho.cy = 15.0;
  views.push_back(look_at({0, 0, 5}, {0, 0, 0}, {0, 1, 0}, ortho));
  write_cameras(dir.file("cameras.json"), views);
  const std::vector<CameraView> back = read_cameras(dir.file("cameras.json"));
  ASSERT_EQ(back.size(), views.size());
  for (std::size_t i = 0; i < views.size(); ++i) {
    EXPECT_TRUE(back[i].world_from_camera.isApprox(views[i].world_from_camera,
                                                   1e-12));
    EXPECT_EQ(back[i].intrinsics.projection, views[i].intrinsics.projection);
    EXPECT_EQ(back[i].intrinsics.width, views[i].intrinsics.width);
    EXPECT_DOUBLE_EQ(back[i].intrinsics.fx, views[i].intrinsics.fx);
    EXPECT_DOUBLE_EQ(back[i].intrinsics.cy, views[i].intrinsics.cy);
  }
}

TEST(CameraTest, RejectsSkewedRotationAndMismatchedImages) {
  CameraView v = make_orbit_views(1, 3.0, 16, 0.7, 0)[0];
  v.world_from_camera(0, 1) += 1e-3;
  EXPECT_THROW(v.validate(), InvalidInput);

  TempDir dir;
  const std::vector<CameraView> views = make_orbit_views(2, 3.0, 16, 0.7, 0);
  write_cameras(dir.file("cameras.json"), views);
  fs::create_directories(dir.file("images"));
  write_exr(dir.file("images/" + default_image_name(0)), Image(16, 16, 3));
  write_exr(dir.file("images/" + default_image_name(1)), Image(17, 16, 3));
  EXPECT_THROW(read_cameras(dir.file("cameras.json"), dir.file("images")),
               InvalidInput);
}

TEST(CameraTest, ProjectionInvertsRay) {
  const CameraView v = make_orbit_views(1, 3.0, 64, 0.7, 9)[0];
  Eigen::Vector3d o, d;
  v.ray(20.25, 41.5, o, d);
  const std::optional<Eigen::Vector2d> px = v.project(o + 2.5 * d);
  ASSERT_TRUE(px.has_value());
  EXPECT_NEAR(px->x(), 20.25, 1e-9);
  EXPECT_NEAR(px->y(), 41.5, 1e-9);
}

TEST(MeshTest, ObjRoundTrip) {
  TempDir dir;
  const Mesh m = make_uv_sphere(6, 9, 1.5);
  write_obj(dir.file("m.obj"), m);
  const Mesh back = read_obj(dir.file("m.obj"));
  // Vertices are re-indexed on read, so corners are compared per triangle.
  ASSERT_EQ(back.triangles.size(), m.triangles.size());
  for (std::size_t i = 0; i < m.triangles.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles[i](k), b = back.triangles[i](k);
      EXPECT_LT((back.positions[b] - m.positions[a]).norm(), 1e-12);
      EXPECT_LT((back.uvs[b] - m.uvs[a]).norm(), 1e-12);
      EXPECT_LT((back.normals[b] - m.normals[a]).norm(), 1e-12);
    }
  }
}

TEST(MeshTest, RejectsOutOfRangeIndices) {
  TempDir dir;
  std::ofstream(dir.file("bad.obj")) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n";
  EXPECT_THROW(read_obj(dir.file("bad.obj")), InvalidInput);
  EXPECT_THROW(read_obj(dir.file("none.obj")), IoFailure);
}

TEST(BvhTest, MatchesBruteForce) {
  const Mesh m = make_uv_sphere(12, 16, 1.0);
  const Bvh bvh(m);
  SplitMix64 rng(5);
  int hits = 0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector3d o = 3.0 * rng.unit_vector();
    const Eigen::Vector3d d =
        (0.8 * rng.unit_vector() - o).normalized();
    const auto a = bvh.intersect(o, d, 0.0, 1e9);
    const auto b = intersect_brute_force(m, o, d, 0.0, 1e9);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (!a) continue;
    ++hits;
    EXPECT_EQ(a->triangle, b->triangle);
    EXPECT_EQ(a->t, b->t);
    EXPECT_EQ(bvh.occluded(o, d, 0.0, a->t * 1.001), true);
    EXPECT_EQ(bvh.occluded(o, d, 0.0, a->t * 0.999), false);
  }
  EXPECT_GT(hits, 100);
}

// Projection

CameraView orthographic_view(const Eigen::Vector3d& dir, int size,
                             float value) {
  Intrinsics in;
  in.projection = Projection::kOrthographic;
  in.width = in.height = size;
  in.fx = in.fy = size / 1.5;
  in.cx = in.cy = size / 2.0;
  CameraView v = look_at(3.0 * dir, Eigen::Vector3d::Zero(),
                         std::abs(dir.z()) > 0.9 ? Eigen::Vector3d::UnitY()
                                                 : Eigen::Vector3d::UnitZ(),
                         in);
  v.image = Image(size, size, 3, value);
  return v;
}

TEST(ProjectionTest, OrthographicQuadSeesIncidenceAngle) {
  const SurfaceGeometry geom(make_quad(1.0), 8, 8);
  const double incidence = 0.5;
  const Eigen::Vector3d dir(std::sin(incidence), 0.0, std::cos(incidence));
  const auto obs = project_observations({orthographic_view(dir, 64, 0.25f)},
                                        geom);
  int covered = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!geom.texels()[i].covered) continue;
    ++covered;
    ASSERT_EQ(obs[i].size(), 1);
    EXPECT_NEAR(obs[i].directions[0].theta, incidence, 1e-9);
    EXPECT_NEAR(obs[i].values(0, 1), 0.25, 1e-7);
    EXPECT_NEAR(obs[i].weights(0), std::cos(incidence), 1e-9);
  }
  EXPECT_EQ(covered, 64);
}

TEST(ProjectionTest, BackFacingTexelsGetNothing) {
  const SurfaceGeometry geom(make_quad(1.0), 8, 8);
  const auto obs = project_observations(
      {orthographic_view(Eigen::Vector3d(0.2, 0, -1).normalized(), 64, 1.0f)},
      geom);
  for (const DirectionalSamples& s : obs) EXPECT_EQ(s.size(), 0);
}

// Independent visibility: front-facing, inside the image, and no brute-force
// hit along the camera ray before the texel's point.
bool oracle_visible(const CameraView& v, const Mesh& mesh,
                    const TexelSample& t) {
  if (!t.covered) return false;
  const Eigen::Vector3d c = v.center();
  const Eigen::Vector3d to_p = t.position - c;
  const double dist = to_p.norm();
  const Eigen::Vector3d d = to_p / dist;
  if (t.frame.col(2).dot(-d) <= 0.0) return false;
  const Eigen::Vector3d q = v.rotation().transpose() * to_p;
  if (q.z() <= 0.0) return false;
  const double px = v.intrinsics.fx * q.x() / q.z() + v.intrinsics.cx;
  const double py = v.intrinsics.fy * q.y() / q.z() + v.intrinsics.cy;
  if (px < 0 || py < 0 || px >= v.intrinsics.width ||
      py >= v.intrinsics.height) {
    return false;
  }
  return !intersect_brute_force(mesh, c, d, 0.0, dist * (1 - 1e-6));
}

TEST(ProjectionTest, SphereCountsMatchVisibilityOracle) {
  const SurfaceGeometry geom(make_uv_sphere(16, 16, 1.0), 16, 16);
  std::vector<CameraView> views = make_orbit_views(100, 3.0, 32, 0.8, 2);
  for (CameraView& v : views) v.image = Image(32, 32, 3, 1.0f);
  const auto obs = project_observations(views, geom);
  int mismatches = 0, total = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    int expected = 0;
    for (const CameraView& v : views) {
      expected += oracle_visible(v, geom.mesh(), geom.texels()[i]);
    }
    total += expected;
    if (obs[i].size() != expected) {
      ++mismatches;
      if (mismatches < 6) {
        ADD_FAILURE() << "texel " << i << " got " << obs[i].size()
                      << " oracle " << expected;
      }
    }
  }
  EXPECT_GT(total, 1000);
  EXPECT_EQ(mismatches, 0);
}

// Textures

MaterialTextures random_textures(int w, int h, std::uint64_t seed) {
  MaterialTextures t(w, h);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    PrincipledParams& p = t.params[i];
    p.base_color = {rng.uniform(), rng.uniform(), rng.uniform()};
    p.metallic = rng.uniform();
    p.roughness = rng.uniform();
    t.entropy[i] = rng.uniform();
    t.valid[i] = 1;
  }
  return t;
}

TEST(TexturesTest, ExportImportIsExactAtNativeResolution) {
  TempDir dir;
  const MaterialTextures t = random_textures(12, 10, 3);
  export_textures(t, dir.file("tex"), 0, true);
  EXPECT_TRUE(fs::exists(dir.file("tex/base_color.png")));
  const MaterialTextures back = import_textures(dir.file("tex"));
  ASSERT_EQ(back.width, 12);
  ASSERT_EQ(back.height, 10);
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    // Maps are stored as 32-bit floats.
    EXPECT_EQ(back.params[i].roughness,
              static_cast<double>(static_cast<float>(t.params[i].roughness)));
    EXPECT_EQ(back.params[i].base_color.z(),
              static_cast<double>(
                  static_cast<float>(t.params[i].base_color.z())));
    EXPECT_EQ(back.entropy[i],
              static_cast<double>(static_cast<float>(t.entropy[i])));
    EXPECT_EQ(back.valid[i], t.valid[i]);
  }
}

TEST(TexturesTest, ConstantParametersGiveConstantMaps) {
  TempDir dir;
  MaterialTextures t(8, 8);
  for (PrincipledParams& p : t.params) {
    p.base_color = {0.25, 0.5, 0.75};
    p.metallic = 0.125;
    p.roughness = 0.375;
  }
  std::fill(t.valid.begin(), t.valid.end(), 1);
  export_textures(t, dir.file("tex"), 32, false);
  const Image r = read_exr(dir.file("tex/roughness.exr"));
  ASSERT_EQ(r.width, 32);
  for (float v : r.data) EXPECT_EQ(v, 0.375f);
  const Image b = read_exr(dir.file("tex/base_color.exr"));
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) {
      EXPECT_EQ(b.at(x, y, 2), 0.75f);
    }
  }
}

TEST(TexturesTest, FillHolesCopiesNearestValid) {
  MaterialTextures t(5, 1);
  t.valid = {0, 1, 0, 0, 1};
  t.params[1].roughness = 0.2;
  t.params[4].roughness = 0.9;
  fill_holes(t);
  EXPECT_EQ(t.params[0].roughness, 0.2);
  EXPECT_EQ(t.params[2].roughness, 0.2);
  EXPECT_EQ(t.params[3].roughness, 0.9);
  EXPECT_EQ(t.valid[0], 0);
}

TEST(TexturesTest, MergeOfIdenticalRunsIsIdentity) {
  const MaterialTextures t = random_textures(6, 6, 11);
  const MaterialTextures m = merge_textures({t, t, t});
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    EXPECT_EQ(m.params[i].roughness, t.params[i].roughness);
    EXPECT_EQ(m.entropy[i], t.entropy[i]);
  }
}

TEST(TexturesTest, MergeOfDisjointMasksIsTheirUnion) {
  MaterialTextures a = random_textures(6, 6, 1);
  MaterialTextures b = random_textures(6, 6, 2);
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    a.valid[i] = i % 3 == 0;
    b.valid[i] = i % 3 == 1;
  }
  const MaterialTextures m = merge_textures({a, b});
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    EXPECT_EQ(m.valid[i], i % 3 != 2);
    if (i % 3 == 0) EXPECT_EQ(m.params[i].metallic, a.params[i].metallic);
    if (i % 3 == 1) EXPECT_EQ(m.params[i].metallic, b.params[i].metallic);
  }
  EXPECT_THROW(merge_textures({a, random_textures(5, 6, 3)}), LayoutMismatch);
}

TEST(TexturesTest, MergePicksLowestEntropy) {
  MaterialTextures a = random_textures(4, 4, 5);
  MaterialTextures b = random_textures(4, 4, 6);
  const MaterialTextures m = merge_textures({a, b});
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const MaterialTextures& best = a.entropy[i] <= b.entropy[i] ? a : b;
    EXPECT_EQ(m.params[i].roughness, best.params[i].roughness);
    EXPECT_EQ(m.entropy[i], std::min(a.entropy[i], b.entropy[i]));
  }
}

TEST(TexturesTest, UnlitHalfIsMoreUncertain) {
  const MaterialTextures truth = make_sphere_material(24, 24, 1);
  testing::SmallSceneOptions o;
  o.light = PresetLight::kHalfLit;
  const Scene scene = testing::make_small_scene(o, truth);
  const TexelGrid g = prepare_grid(scene, FitConfig{});
  std::vector<double> e, h;
  for (const TexelRecord& t : g.texels) {
    if (!t.valid) continue;
    e.push_back(t.light.irradiance().sum());
    h.push_back(t.entropy);
  }
  ASSERT_GT(e.size(), 100u);
  std::vector<double> sorted = e;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  double lit = 0, unlit = 0;
  int n_lit = 0, n_unlit = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > median) {
      lit += h[i];
      ++n_lit;
    } else {
      unlit += h[i];
      ++n_unlit;
    }
  }
  EXPECT_GT(unlit / n_unlit, lit / n_lit);
}

}  // namespace
}  // namespace freqbrdf
