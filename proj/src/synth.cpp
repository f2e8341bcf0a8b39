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

#include "freqbrdf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "freqbrdf/error.hpp"
#include "freqbrdf/parallel.hpp"

namespace freqbrdf {

namespace {

constexpr double kPi = std::numbers::pi;

// Golub-Welsch for the Legendre weight on [0, 1].
void gauss_legendre_unit(int n, Eigen::VectorXd& nodes,
                         Eigen::VectorXd& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes = 0.5 * (es.eigenvalues().array() + 1.0);
  weights = es.eigenvectors().row(0).transpose().array().square();
}

Eigen::Vector3d vmf_lobe(const Eigen::Vector3d& d, const Eigen::Vector3d& axis,
                         double kappa, double power) {
  // Unit-power lobe: amplitude kappa / (2 pi (1 - e^{-2 kappa})).
  const double amp =
      power * kappa / (2.0 * kPi * (1.0 - std::exp(-2.0 * kappa)));
  return Eigen::Vector3d::Constant(amp * std::exp(kappa * (d.dot(axis) - 1.0)));
}

Eigen::Vector3d dir_from_angles(double elevation, double azimuth) {
  return {std::cos(elevation) * std::cos(azimuth),
          std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
}

double to_float(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

void gauss_laguerre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    j(i, i) = 2.0 * i + 1.0;
    if (i > 0) j(i, i - 1) = j(i - 1, i) = i;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes = es.eigenvalues();
  weights = es.eigenvectors().row(0).transpose().array().square();
}

Eigen::Vector3d quadrature_irradiance(const LocalLight& light, int n_theta,
                                      int n_phi) {
  Eigen::VectorXd mu, w;
  gauss_legendre_unit(n_theta, mu, w);
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  for (int i = 0; i < n_theta; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - mu(i) * mu(i)));
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / n_phi;
      const Eigen::Vector3d d(s * std::cos(phi), s * std::sin(phi), mu(i));
      e += (w(i) * mu(i) * 2.0 * kPi / n_phi) * light(d);
    }
  }
  return e;
}

Eigen::Vector3d quadrature_outgoing(const LocalLight& light,
                                    const TsParams& params,
                                    const Direction& wo,
                                    const Eigen::Vector3d& irradiance,
                                    const ModelOptions& options,
                                    int radial_nodes, int azimuth_nodes) {
  const Eigen::Vector3d o = to_vector(wo);
  Eigen::Vector3d b = params.brdf.kd.cwiseProduct(irradiance) / kPi;
  const double cos_o = o.z();
  if (cos_o <= 0.0 || params.brdf.ks == 0.0) return b;
  const double alpha = params.brdf.alpha;
  Eigen::VectorXd u, w;
  gauss_laguerre(radial_nodes, u, w);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int i = 0; i < radial_nodes; ++i) {
    const double tan_m = alpha * std::sqrt(u(i));
    const double cos_m = 1.0 / std::sqrt(1.0 + tan_m * tan_m);
    const double sin_m = tan_m * cos_m;
    for (int k = 0; k < azimuth_nodes; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / azimuth_nodes;
      const Eigen::Vector3d m(sin_m * std::cos(phi), sin_m * std::sin(phi),
                              cos_m);
      const double om = o.dot(m);
      if (om <= 0.0) continue;
      const Eigen::Vector3d wi = 2.0 * om * m - o;
      if (wi.z() <= 0.0) continue;
      const double shadow =
          options.shadowing ? smith_g1_cos(alpha, wi.z()) : 1.0;
      sum += (w(i) / azimuth_nodes * shadow * om / (cos_o * cos_m)) *
             light(wi);
    }
  }
  const double mask = options.masking ? smith_g1_cos(alpha, cos_o) : 1.0;
  b += mask * specular_tint(params, wo.theta, options.fresnel)
                  .cwiseProduct(sum);
  return b;
}

std::vector<Image> synth_generate(const SurfaceGeometry& geom,
                                  const EnvironmentMap& env,
                                  const MaterialTextures& truth,
                                  const std::vector<CameraView>& views,
                                  const SynthOptions& options) {
  if (truth.width != geom.width() || truth.height != geom.height()) {
    throw LayoutMismatch("material textures differ from the texel layout");
  }
  const int n_texels = geom.width() * geom.height();
  std::vector<ShadingContext> contexts;
  std::vector<Eigen::Vector3d> irradiance;
  std::unique_ptr<LightBasis> basis;
  if (options.mode == RenderMode::kConvolution) {
    basis = std::make_unique<LightBasis>(options.max_degree);
    contexts.resize(static_cast<std::size_t>(n_texels));
    parallel_for(n_texels, [&](int i) {
      const TexelSample& t = geom.texels()[static_cast<std::size_t>(i)];
      if (!t.covered) return;
      const double r = truth.params[static_cast<std::size_t>(i)].roughness;
      contexts[static_cast<std::size_t>(i)] = ShadingContext::from_samples(
          *basis, sample_incoming(env, t.frame, basis->size()), r * r);
    });
  } else {
    irradiance.assign(static_cast<std::size_t>(n_texels),
                      Eigen::Vector3d::Zero());
    parallel_for(n_texels, [&](int i) {
      const TexelSample& t = geom.texels()[static_cast<std::size_t>(i)];
      if (!t.covered) return;
      irradiance[static_cast<std::size_t>(i)] = quadrature_irradiance(
          [&](const Eigen::Vector3d& d) { return env.lookup(t.frame * d); },
          32, 64);
    });
  }

  auto shade = [&](int texel, const Eigen::Matrix3d& frame,
                   const Eigen::Vector3d& to_camera) -> Eigen::Vector3d {
    const Direction wo = direction_from_vector(frame.transpose() * to_camera);
    const TsParams p =
        principled_to_ts(truth.params[static_cast<std::size_t>(texel)]);
    if (options.mode == RenderMode::kConvolution) {
      const std::vector<Direction> one{wo};
      return render_outgoing(contexts[static_cast<std::size_t>(texel)], p, one,
                             options.model)
          .row(0)
          .transpose();
    }
    return quadrature_outgoing(
        [&](const Eigen::Vector3d& d) { return env.lookup(frame * d); }, p, wo,
        irradiance[static_cast<std::size_t>(texel)], options.model,
        options.radial_nodes, options.azimuth_nodes);
  };

  std::vector<Image> images;
  images.reserve(views.size());
  for (const CameraView& view : views) {
    const int w = view.intrinsics.width, h = view.intrinsics.height;
    std::vector<int> pixel_texel(static_cast<std::size_t>(w) * h, -1);
    parallel_for(h, [&](int y) {
      for (int x = 0; x < w; ++x) {
        Eigen::Vector3d origin, dir;
        view.ray(x + 0.5, y + 0.5, origin, dir);
        const auto hit = geom.bvh().intersect(origin, dir, 0.0, INFINITY);
        if (!hit) continue;
        const Eigen::Vector2i t =
            texel_from_uv(geom.hit_uv(*hit), geom.width(), geom.height());
        pixel_texel[static_cast<std::size_t>(y) * w + x] =
            t.y() * geom.width() + t.x();
      }
    });
    // Shade every visible texel once per view.
    std::vector<int> needed;
    std::vector<char> seen(static_cast<std::size_t>(n_texels), 0);
    for (int t : pixel_texel) {
      if (t >= 0 && !seen[static_cast<std::size_t>(t)] &&
          geom.texels()[static_cast<std::size_t>(t)].covered) {
        seen[static_cast<std::size_t>(t)] = 1;
        needed.push_back(t);
      }
    }
    std::vector<Eigen::Vector3d> texel_value(static_cast<std::size_t>(n_texels));
    parallel_for(static_cast<int>(needed.size()), [&](int k) {
      const int t = needed[static_cast<std::size_t>(k)];
      const TexelSample& s = geom.texels()[static_cast<std::size_t>(t)];
      texel_value[static_cast<std::size_t>(t)] =
          shade(t, s.frame, view.direction_to_camera(s.position));
    });
    Image img(w, h, 3);
    parallel_for(h, [&](int y) {
      for (int x = 0; x < w; ++x) {
        const int t = pixel_texel[static_cast<std::size_t>(y) * w + x];
        if (t < 0) continue;
        if (seen[static_cast<std::size_t>(t)]) {
          img.set_rgb(x, y, texel_value[static_cast<std::size_t>(t)]);
          continue;
        }
        // The hit texel has no surface sample; shade the hit point itself.
        Eigen::Vector3d origin, dir;
        view.ray(x + 0.5, y + 0.5, origin, dir);
        const auto hit = geom.bvh().intersect(origin, dir, 0.0, INFINITY);
        const Eigen::Matrix3d frame = frisvad_frame(geom.hit_normal(*hit));
        if (options.mode == RenderMode::kConvolution) {
          const double r = truth.params[static_cast<std::size_t>(t)].roughness;
          const ShadingContext ctx = ShadingContext::from_samples(
              *basis, sample_incoming(env, frame, basis->size()), r * r);
          const Direction wo = direction_from_vector(frame.transpose() * -dir);
          const std::vector<Direction> one{wo};
          img.set_rgb(x, y,
                      render_outgoing(ctx,
                                      principled_to_ts(truth.params[
                                          static_cast<std::size_t>(t)]),
                                      one, options.model)
                          .row(0)
                          .transpose());
        } else {
          const Eigen::Vector3d e = quadrature_irradiance(
              [&](const Eigen::Vector3d& d) { return env.lookup(frame * d); },
              32, 64);
          const Direction wo = direction_from_vector(frame.transpose() * -dir);
          img.set_rgb(
              x, y,
              quadrature_outgoing(
                  [&](const Eigen::Vector3d& d) {
                    return env.lookup(frame * d);
                  },
                  principled_to_ts(truth.params[static_cast<std::size_t>(t)]),
                  wo, e, options.model, options.radial_nodes,
                  options.azimuth_nodes));
        }
      }
    });
    images.push_back(std::move(img));
  }
  return images;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Eigen::Vector3d SplitMix64::unit_vector() {
  const double z = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * kPi);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

const char* preset_light_name(PresetLight light) {
  switch (light) {
    case PresetLight::kSunSky:
      return "sunsky";
    case PresetLight::kStudio:
      return "studio";
    case PresetLight::kOvercast:
      return "overcast";
    case PresetLight::kSunset:
      return "sunset";
    case PresetLight::kHalfLit:
      return "halflit";
  }
  return "unknown";
}

EnvironmentMap make_preset_environment(PresetLight light, int height,
                                       std::uint64_t seed) {
  SplitMix64 rng(seed * 7919 + static_cast<std::uint64_t>(light) + 1);
  const double jitter = rng.uniform(0.0, 2.0 * kPi);
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> f;
  switch (light) {
    case PresetLight::kSunSky: {
      const Eigen::Vector3d sun = dir_from_angles(0.85, jitter);
      f = [sun](const Eigen::Vector3d& d) -> Eigen::Vector3d {
        const double up = 0.5 * (1.0 + d.z());
        const Eigen::Vector3d sky =
            Eigen::Vector3d(0.25, 0.35, 0.55) * (0.3 + 0.7 * up) +
            Eigen::Vector3d(0.12, 0.1, 0.08) * (1.0 - up);
        return sky +
               vmf_lobe(d, sun, 500.0, 2.5).cwiseProduct(
                   Eigen::Vector3d(1.0, 0.95, 0.85));
      };
      break;
    }
    case PresetLight::kStudio: {
      const Eigen::Vector3d a = dir_from_angles(0.6, jitter);
      const Eigen::Vector3d b = dir_from_angles(0.2, jitter + 2.1);
      const Eigen::Vector3d c = dir_from_angles(-0.3, jitter + 4.0);
      f = [a, b, c](const Eigen::Vector3d& d) -> Eigen::Vector3d {
        return Eigen::Vector3d::Constant(0.05) +
               vmf_lobe(d, a, 60.0, 1.2).cwiseProduct(
                   Eigen::Vector3d(1.0, 1.0, 1.0)) +
               vmf_lobe(d, b, 40.0, 0.8).cwiseProduct(
                   Eigen::Vector3d(1.0, 0.8, 0.6)) +
               vmf_lobe(d, c, 30.0, 0.6).cwiseProduct(
                   Eigen::Vector3d(0.6, 0.8, 1.0));
      };
      break;
    }
    case PresetLight::kOvercast: {
      const Eigen::Vector3d tilt = dir_from_angles(1.2, jitter);
      f = [tilt](const Eigen::Vector3d& d) -> Eigen::Vector3d {
        const double up = 0.5 * (1.0 + d.dot(tilt));
        return Eigen::Vector3d(0.5, 0.5, 0.55) * (0.3 + 0.7 * up * up);
      };
      break;
    }
    case PresetLight::kSunset: {
      const Eigen::Vector3d sun = dir_from_angles(0.15, jitter);
      f = [sun](const Eigen::Vector3d& d) -> Eigen::Vector3d {
        const double up = 0.5 * (1.0 + d.z());
        const double toward = 0.5 * (1.0 + d.dot(sun));
        const Eigen::Vector3d sky =
            Eigen::Vector3d(0.3, 0.2, 0.4) * (0.4 + 0.6 * up) +
            Eigen::Vector3d(0.4, 0.2, 0.05) * toward * toward;
        return sky + vmf_lobe(d, sun, 300.0, 1.8).cwiseProduct(
                         Eigen::Vector3d(1.0, 0.6, 0.3));
      };
      break;
    }
    case PresetLight::kHalfLit: {
      const Eigen::Vector3d sun = dir_from_angles(0.0, jitter);
      f = [sun](const Eigen::Vector3d& d) -> Eigen::Vector3d {
        return Eigen::Vector3d::Constant(0.01) +
               vmf_lobe(d, sun, 200.0, 3.0);
      };
      break;
    }
  }
  return make_environment(height, f);
}

MaterialTextures make_sphere_material(int width, int height,
                                      std::uint64_t seed) {
  SplitMix64 rng(seed * 104729 + 17);
  const double p1 = rng.uniform(0.0, 2.0 * kPi);
  const double p2 = rng.uniform(0.0, 2.0 * kPi);
  const double p3 = rng.uniform(0.0, 2.0 * kPi);
  const double p4 = rng.uniform(0.0, 2.0 * kPi);
  const int shift = static_cast<int>(rng.next() % 4);
  const double metal_levels[4] = {0.0, 1.0, 0.0, 0.6};
  MaterialTextures t(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Vector2d uv = texel_center_uv(x, y, width, height);
      const double a = 2.0 * kPi * uv.x(), b = kPi * uv.y();
      PrincipledParams& p = t.at(x, y);
      p.base_color = Eigen::Vector3d(
          to_float(0.5 + 0.35 * std::sin(a + p1)),
          to_float(0.5 + 0.3 * std::sin(2.0 * b + p2)),
          to_float(0.45 + 0.3 * std::cos(a - b + p3)));
      p.roughness =
          to_float(0.675 + 0.225 * std::sin(a + 2.0 * b + p4));
      const int block = (static_cast<int>(uv.x() * 4.0) + shift) % 4;
      p.metallic = metal_levels[std::clamp(block, 0, 3)];
    }
  }
  return t;
}

std::vector<CameraView> make_orbit_views(int count, double distance,
                                         int image_size, double fov_radians,
                                         std::uint64_t seed) {
  SplitMix64 rng(seed * 15485863 + 3);
  const Eigen::Vector3d axis = rng.unit_vector();
  const double angle = rng.uniform(0.0, 2.0 * kPi);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  const Intrinsics k = pinhole_intrinsics(image_size, image_size, fov_radians);
  std::vector<CameraView> views;
  const std::vector<Direction> dirs = fibonacci_sphere(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::Vector3d eye = distance * (rot * to_vector(dirs[i]));
    CameraView v = look_at(eye, Eigen::Vector3d::Zero(),
                           Eigen::Vector3d::UnitZ(), k);
    v.image_name = default_image_name(i);
    views.push_back(std::move(v));
  }
  return views;
}

Mesh make_scene_sphere(const SphereScene& scene) {
  return make_uv_sphere(scene.texture_size, scene.texture_size, 1.0);
}

Figure3Scenario make_figure3_scenario(std::uint64_t seed) {
  constexpr int kDegree = 30;
  constexpr int kDense = 6000;
  SplitMix64 rng(seed * 2654435761ull + 11);
  struct Lobe {
    Eigen::Vector3d axis;
    double kappa, amp;
  };
  std::vector<Lobe> lobes;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d a = rng.unit_vector();
    a.z() = std::abs(a.z());
    lobes.push_back({a.normalized(), rng.uniform(10.0, 60.0),
                     rng.uniform(0.5, 2.0)});
  }
  auto radiance = [&](const Eigen::Vector3d& d) {
    double f = 0.5 + 0.3 * d.z();
    for (const Lobe& l : lobes) {
      f += l.amp * std::exp(l.kappa * (d.dot(l.axis) - 1.0));
    }
    return f;
  };
  const std::vector<Direction> dense = fibonacci_sphere(kDense);
  Figure3Scenario s;
  s.light = ShExpansiond(kDegree, 1);
  Eigen::VectorXd y(sh_count(kDegree));
  for (const Direction& d : dense) {
    eval_sh_basis<double>(to_vector(d), kDegree, y.data());
    s.light.coeffs().col(0) += (4.0 * kPi / kDense * radiance(to_vector(d))) * y;
  }

  std::vector<Direction> upper = fibonacci_hemisphere(100);
  std::vector<std::pair<double, int>> dist;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d v = to_vector(upper[static_cast<std::size_t>(i)]);
    dist.emplace_back((v.x() - 0.5) * (v.x() - 0.5) +
                          (v.y() - 0.3) * (v.y() - 0.3),
                      i);
  }
  std::sort(dist.begin(), dist.end());
  std::vector<char> drop(100, 0);
  for (int i = 0; i < 12; ++i) drop[static_cast<std::size_t>(dist[i].second)] = 1;
  std::vector<Direction> kept;
  for (int i = 0; i < 100; ++i) {
    if (drop[static_cast<std::size_t>(i)]) {
      s.masked.push_back(upper[static_cast<std::size_t>(i)]);
    } else {
      kept.push_back(upper[static_cast<std::size_t>(i)]);
    }
  }
  const ShExpansiond filtered =
      convolve_isotropic(s.light, filter_kernel(s.alpha, kDegree));
  const int n = static_cast<int>(kept.size());
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = std::cos(kept[static_cast<std::size_t>(i)].theta);
  s.incoming = DirectionalSamples(kept, s.light.evaluate(kept).cwiseMax(0.0), w);
  s.outgoing = DirectionalSamples(kept, filtered.evaluate(kept).cwiseMax(0.0), w);
  return s;
}

std::vector<Figure5Case> make_figure5_cases(int max_degree) {
  constexpr double kPower = 0.5;
  constexpr double kLowPass = 0.15;
  ShExpansiond dirac(max_degree, 1);
  Eigen::VectorXd y(sh_count(max_degree));
  eval_sh_basis<double>(Eigen::Vector3d::UnitZ(), max_degree, y.data());
  dirac.coeffs().col(0) = kPower * y;
  const ShExpansiond low =
      convolve_isotropic(dirac, filter_kernel(kLowPass, max_degree));
  const Eigen::VectorXd kd = Eigen::VectorXd::Constant(1, 0.5);
  const Eigen::VectorXd e = Eigen::VectorXd::Constant(1, kPower);

  auto make = [&](const std::string& name, const ShExpansiond& light,
                  double ks, double r) {
    Figure5Case c;
    c.name = name;
    c.ks = ks;
    c.alpha = r * r;
    const ShExpansiond b =
        predict_outgoing_coefficients(light, kd, e, ks, c.alpha);
    c.spectra.light = power_spectrum(light);
    c.spectra.outgoing = power_spectrum(b);
    c.spectra.l00 = Eigen::Vector3d::Constant(light(0, 0));
    c.spectra.b00 = Eigen::Vector3d::Constant(b(0, 0));
    c.spectra.irradiance = Eigen::Vector3d::Constant(kPower);
    return c;
  };
  return {make("dirac", dirac, 0.5, 0.3), make("low_frequency", low, 0.5, 0.3),
          make("low_specular", dirac, 0.05, 0.3)};
}

}  // namespace freqbrdf
