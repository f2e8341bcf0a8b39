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

#ifndef FREQBRDF_ENVIRONMENT_HPP_
#define FREQBRDF_ENVIRONMENT_HPP_

#include <functional>
#include <string>

#include <Eigen/Core>

#include "freqbrdf/image.hpp"
#include "freqbrdf/optimizer.hpp"
#include "freqbrdf/sh.hpp"

namespace freqbrdf {

// Equirectangular radiance map. Pixel (x, y) is centred on
// phi = 2 pi (x + 1/2) / W and theta = pi (y + 1/2) / H, with theta measured
// from +z and phi from +x towards +y.
class EnvironmentMap {
 public:
  EnvironmentMap() = default;
  // Requires 3 channels, width = 2 height and finite values. Negative values
  // are clamped to zero and counted.
  explicit EnvironmentMap(Image image);

  int width() const { return image_.width; }
  int height() const { return image_.height; }
  const Image& image() const { return image_; }
  int clamped_pixels() const { return clamped_pixels_; }

  // Bilinear lookup, wrapping in phi and clamping in theta.
  Eigen::Vector3d lookup(const Eigen::Vector3d& world_dir) const;
  Eigen::Vector3d lookup(const Direction& d) const {
    return lookup(to_vector(d));
  }

  static Direction pixel_direction(int x, int y, int width, int height);

 private:
  Image image_;
  int clamped_pixels_ = 0;
};

// Evaluates radiance(dir) at every pixel centre of a height x 2 height map.
EnvironmentMap make_environment(
    int height, const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>&
                    radiance);

// Throws UnsupportedFormat, NonHdrInput, InvalidInput (NaN, wrong aspect) or
// IoFailure.
EnvironmentMap load_environment(const std::string& path);
void save_environment(const std::string& path, const EnvironmentMap& env);

// n Fibonacci directions on the upper hemisphere of frame (columns tangent,
// bitangent, normal), looked up in env; weights 1.
DirectionalSamples sample_incoming(const EnvironmentMap& env,
                                   const Eigen::Matrix3d& frame, int n);

// Distant environment light, no self-occlusion.
class EnvironmentLight : public IncomingLight {
 public:
  explicit EnvironmentLight(const EnvironmentMap& env) : env_(env) {}
  Eigen::Vector3d radiance(const TexelRecord& texel,
                           const Eigen::Vector3d& local_dir) const override {
    return env_.lookup(texel.frame * local_dir);
  }

 private:
  const EnvironmentMap& env_;
};

}  // namespace freqbrdf

#endif  // FREQBRDF_ENVIRONMENT_HPP_
