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

#include "freqbrdf/projection.hpp"

#include <cmath>

#include "freqbrdf/error.hpp"
#include "freqbrdf/parallel.hpp"

namespace freqbrdf {

bool texel_visible(const CameraView& view, const SurfaceGeometry& geom,
                   const TexelSample& texel) {
  if (!texel.covered) return false;
  const Eigen::Vector3d& p = texel.position;
  const Eigen::Vector3d n = texel.frame.col(2);
  const Eigen::Vector3d d = view.direction_to_camera(p);
  if (n.dot(d) <= 0.0) return false;
  if (!view.project(p)) return false;
  // Cast from the camera towards the point, as the camera ray sees it. A
  // ray leaving the surface can slip past a neighbouring facet at grazing
  // angles.
  const double eps = geom.ray_epsilon();
  const double dist = view.distance_to_camera(p);
  return !geom.bvh().occluded(p + dist * d, -d, 0.0, dist - eps);
}

std::vector<DirectionalSamples> project_observations(
    const std::vector<CameraView>& views, const SurfaceGeometry& geom,
    const ProjectionOptions& options) {
  if (views.empty()) throw InvalidInput("projection needs at least one view");
  for (const auto& v : views) {
    if (v.image.empty()) throw InvalidInput("every view needs an image");
    if (v.image.channels != 3) throw InvalidInput("view images must be RGB");
  }
  const int n_texels = geom.width() * geom.height();
  std::vector<DirectionalSamples> out(static_cast<std::size_t>(n_texels));
  parallel_for(n_texels, [&](int i) {
    const TexelSample& texel = geom.texels()[static_cast<std::size_t>(i)];
    std::vector<Direction> dirs;
    std::vector<Eigen::Vector3d> vals;
    std::vector<double> weights;
    if (texel.covered) {
      for (const CameraView& view : views) {
        if (!texel_visible(view, geom, texel)) continue;
        const Eigen::Vector2d px = *view.project(texel.position);
        const int x = std::min(static_cast<int>(px.x()), view.image.width - 1);
        const int y =
            std::min(static_cast<int>(px.y()), view.image.height - 1);
        const Direction d = direction_from_vector(
            texel.frame.transpose() * view.direction_to_camera(texel.position));
        dirs.push_back(d);
        vals.push_back(view.image.rgb(x, y).cwiseMax(0.0));
        weights.push_back(options.uniform_weights
                              ? 1.0
                              : sample_weight(d.theta, options.weight_a,
                                              options.weight_b));
      }
    }
    DirectionalSamples& s = out[static_cast<std::size_t>(i)];
    s.directions = std::move(dirs);
    s.values.resize(static_cast<Eigen::Index>(vals.size()), 3);
    s.weights.resize(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t k = 0; k < vals.size(); ++k) {
      s.values.row(static_cast<Eigen::Index>(k)) = vals[k].transpose();
      s.weights(static_cast<Eigen::Index>(k)) = weights[k];
    }
  });
  return out;
}

TexelGrid make_texel_grid(const SurfaceGeometry& geom,
                          std::vector<DirectionalSamples> observations) {
  TexelGrid grid;
  grid.width = geom.width();
  grid.height = geom.height();
  const std::size_t n = static_cast<std::size_t>(grid.width) * grid.height;
  if (!observations.empty() && observations.size() != n) {
    throw InvalidInput("one observation set per texel required");
  }
  grid.texels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    TexelRecord& t = grid.texels[i];
    t.u = static_cast<int>(i) % grid.width;
    t.v = static_cast<int>(i) / grid.width;
    t.frame = geom.texels()[i].frame;
    if (!observations.empty()) t.samples = std::move(observations[i]);
    if (!geom.texels()[i].covered) t.samples = DirectionalSamples();
  }
  return grid;
}

}  // namespace freqbrdf
