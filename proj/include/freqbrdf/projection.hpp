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

#ifndef FREQBRDF_PROJECTION_HPP_
#define FREQBRDF_PROJECTION_HPP_

#include <vector>

#include "freqbrdf/camera.hpp"
#include "freqbrdf/geometry.hpp"
#include "freqbrdf/optimizer.hpp"
#include "freqbrdf/sh.hpp"

namespace freqbrdf {

struct ProjectionOptions {
  double weight_a = 1.0;
  double weight_b = 1.0;
  // Every sample gets weight 1 instead of sample_weight(theta_o).
  bool uniform_weights = false;
};

// For every texel (row-major), the observations from views that see the
// texel's surface point unoccluded and front-facing. Directions are in the
// texel frame; the value is the nearest pixel.
std::vector<DirectionalSamples> project_observations(
    const std::vector<CameraView>& views, const SurfaceGeometry& geom,
    const ProjectionOptions& options = {});

// True when view v sees the surface point of texel (x, y): front-facing,
// inside the image and not occluded. Shared by the projection and by tests.
bool texel_visible(const CameraView& view, const SurfaceGeometry& geom,
                   const TexelSample& texel);

// Texel grid over the geometry's texture with observations attached.
TexelGrid make_texel_grid(const SurfaceGeometry& geom,
                          std::vector<DirectionalSamples> observations);

}  // namespace freqbrdf

#endif  // FREQBRDF_PROJECTION_HPP_
