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

#ifndef FREQBRDF_TEXTURES_HPP_
#define FREQBRDF_TEXTURES_HPP_

#include <string>
#include <vector>

#include "freqbrdf/brdf.hpp"
#include "freqbrdf/optimizer.hpp"

namespace freqbrdf {

// Parameter, entropy and validity maps, row-major with row 0 at the top.
struct MaterialTextures {
  int width = 0;
  int height = 0;
  std::vector<PrincipledParams> params;
  std::vector<double> entropy;
  std::vector<unsigned char> valid;

  MaterialTextures() = default;
  MaterialTextures(int w, int h);

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  PrincipledParams& at(int x, int y) { return params[index(x, y)]; }
  const PrincipledParams& at(int x, int y) const { return params[index(x, y)]; }

  static MaterialTextures from_grid(const TexelGrid& grid);
};

// Copies the parameters of the nearest valid texel (breadth-first over
// 4-neighbourhoods) into invalid texels. Validity flags are unchanged.
void fill_holes(MaterialTextures& textures);

// Nearest-neighbour resampling to a new resolution.
MaterialTextures resample(const MaterialTextures& textures, int width,
                          int height);

// Writes base_color.exr (RGB), roughness.exr, metallic.exr, entropy.exr and
// valid.exr (single channel) plus an optional sRGB base_color.png preview.
// Invalid texels are hole-filled in the parameter maps and stay marked in
// valid.exr. resolution 0 keeps the native size. Throws IoFailure.
void export_textures(const MaterialTextures& textures,
                     const std::string& out_dir, int resolution = 0,
                     bool png_preview = true);

// Reads the maps written by export_textures. Missing entropy or validity
// maps default to 1 and valid.
MaterialTextures import_textures(const std::string& dir);

// Per-texel error: mean of the RGB-averaged squared base colour error, the
// squared roughness error and the squared metallic error.
double texel_error(const PrincipledParams& a, const PrincipledParams& b);

// Mean texel_error over texels valid in truth. Throws LayoutMismatch on a
// size mismatch.
double parameter_mse(const MaterialTextures& estimate,
                     const MaterialTextures& truth);

// Per texel, the parameters of the valid run with the lowest entropy.
// Texels valid in no run keep the first run's values and stay invalid.
// Throws LayoutMismatch when the resolutions differ.
MaterialTextures merge_textures(const std::vector<MaterialTextures>& runs);

}  // namespace freqbrdf

#endif  // FREQBRDF_TEXTURES_HPP_
