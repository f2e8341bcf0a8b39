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

#include "freqbrdf/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

namespace {
constexpr double kPi = std::numbers::pi;
}

EnvironmentMap::EnvironmentMap(Image image) : image_(std::move(image)) {
  if (image_.channels != 3) {
    throw InvalidInput("environment map must have RGB channels");
  }
  if (image_.height < 1 || image_.width != 2 * image_.height) {
    throw InvalidInput("environment map must be lat-long with width = 2 height");
  }
  for (float& v : image_.data) {
    if (!std::isfinite(v)) {
      throw InvalidInput("environment map contains a non-finite pixel");
    }
    if (v < 0.0f) {
      v = 0.0f;
      ++clamped_pixels_;
    }
  }
}

Direction EnvironmentMap::pixel_direction(int x, int y, int width,
                                          int height) {
  return make_direction(kPi * (y + 0.5) / height,
                        2.0 * kPi * (x + 0.5) / width);
}

Eigen::Vector3d EnvironmentMap::lookup(const Eigen::Vector3d& world_dir) const {
  const Eigen::Vector3d d = world_dir.normalized();
  const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
  double phi = std::atan2(d.y(), d.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  const int w = image_.width, h = image_.height;
  const double fx = phi / (2.0 * kPi) * w - 0.5;
  const double fy = std::clamp(theta / kPi * h - 0.5, 0.0, h - 1.0);
  const double x0f = std::floor(fx);
  const double tx = fx - x0f;
  const int y0 = std::min(static_cast<int>(fy), h - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ty = fy - y0;
  const int x0 = ((static_cast<int>(x0f) % w) + w) % w;
  const int x1 = (x0 + 1) % w;
  return (1 - ty) * ((1 - tx) * image_.rgb(x0, y0) + tx * image_.rgb(x1, y0)) +
         ty * ((1 - tx) * image_.rgb(x0, y1) + tx * image_.rgb(x1, y1));
}

EnvironmentMap make_environment(
    int height, const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>&
                    radiance) {
  Image img(2 * height, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < 2 * height; ++x) {
      const Direction d =
          EnvironmentMap::pixel_direction(x, y, 2 * height, height);
      img.set_rgb(x, y, radiance(to_vector(d)));
    }
  }
  return EnvironmentMap(std::move(img));
}

EnvironmentMap load_environment(const std::string& path) {
  Image img = read_exr(path);
  if (img.channels == 1) {
    Image rgb(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) rgb.set_rgb(x, y, img.rgb(x, y));
    img = std::move(rgb);
  }
  return EnvironmentMap(std::move(img));
}

void save_environment(const std::string& path, const EnvironmentMap& env) {
  write_exr(path, env.image());
}

DirectionalSamples sample_incoming(const EnvironmentMap& env,
                                   const Eigen::Matrix3d& frame, int n) {
  std::vector<Direction> dirs = fibonacci_hemisphere(n);
  Eigen::MatrixXd values(n, 3);
  for (int i = 0; i < n; ++i) {
    values.row(i) = env.lookup(frame * to_vector(dirs[i])).transpose();
  }
  return DirectionalSamples(std::move(dirs), std::move(values));
}

}  // namespace freqbrdf
