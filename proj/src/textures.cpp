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

#include "freqbrdf/textures.hpp"

#include <deque>
#include <filesystem>
#include <utility>

#include "freqbrdf/error.hpp"
#include "freqbrdf/image.hpp"
#include "freqbrdf/spectrum.hpp"

namespace freqbrdf {

namespace fs = std::filesystem;

MaterialTextures::MaterialTextures(int w, int h)
    : width(w),
      height(h),
      params(static_cast<std::size_t>(w) * h),
      entropy(static_cast<std::size_t>(w) * h, 1.0),
      valid(static_cast<std::size_t>(w) * h, 1) {}

MaterialTextures MaterialTextures::from_grid(const TexelGrid& grid) {
  MaterialTextures t(grid.width, grid.height);
  for (std::size_t i = 0; i < grid.texels.size(); ++i) {
    t.params[i] = grid.texels[i].params;
    t.entropy[i] = grid.texels[i].valid ? grid.texels[i].entropy : 1.0;
    t.valid[i] = grid.texels[i].valid ? 1 : 0;
  }
  return t;
}

void fill_holes(MaterialTextures& textures) {
  const int w = textures.width, h = textures.height;
  std::vector<int> source(textures.params.size(), -1);
  std::deque<int> queue;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (textures.valid[i]) {
      source[i] = static_cast<int>(i);
      queue.push_back(static_cast<int>(i));
    }
  }
  if (queue.empty()) return;
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    const int x = i % w, y = i / w;
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      const int j = ny * w + nx;
      if (source[static_cast<std::size_t>(j)] >= 0) continue;
      source[static_cast<std::size_t>(j)] = source[static_cast<std::size_t>(i)];
      queue.push_back(j);
    }
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!textures.valid[i]) {
      textures.params[i] =
          textures.params[static_cast<std::size_t>(source[i])];
    }
  }
}

MaterialTextures resample(const MaterialTextures& textures, int width,
                          int height) {
  if (width == textures.width && height == textures.height) return textures;
  MaterialTextures out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(textures.height - 1,
                            static_cast<int>((y + 0.5) * textures.height / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(textures.width - 1,
                              static_cast<int>((x + 0.5) * textures.width / width));
      const std::size_t s = textures.index(sx, sy), d = out.index(x, y);
      out.params[d] = textures.params[s];
      out.entropy[d] = textures.entropy[s];
      out.valid[d] = textures.valid[s];
    }
  }
  return out;
}

void export_textures(const MaterialTextures& textures,
                     const std::string& out_dir, int resolution,
                     bool png_preview) {
  MaterialTextures filled = textures;
  fill_holes(filled);
  const MaterialTextures t =
      resolution > 0 ? resample(filled, resolution, resolution) : filled;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir + ": " + ec.message());
  Image base(t.width, t.height, 3), rough(t.width, t.height, 1),
      metal(t.width, t.height, 1), ent(t.width, t.height, 1),
      mask(t.width, t.height, 1);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      const std::size_t i = t.index(x, y);
      base.set_rgb(x, y, t.params[i].base_color);
      rough.at(x, y) = static_cast<float>(t.params[i].roughness);
      metal.at(x, y) = static_cast<float>(t.params[i].metallic);
      ent.at(x, y) = static_cast<float>(t.entropy[i]);
      mask.at(x, y) = t.valid[i] ? 1.0f : 0.0f;
    }
  }
  const fs::path dir(out_dir);
  write_exr((dir / "base_color.exr").string(), base);
  write_exr((dir / "roughness.exr").string(), rough);
  write_exr((dir / "metallic.exr").string(), metal);
  write_exr((dir / "entropy.exr").string(), ent);
  write_exr((dir / "valid.exr").string(), mask);
  if (png_preview) write_png_srgb((dir / "base_color.png").string(), base);
}

MaterialTextures import_textures(const std::string& dir) {
  const fs::path d(dir);
  const Image base = read_exr((d / "base_color.exr").string());
  const Image rough = read_exr((d / "roughness.exr").string());
  const Image metal = read_exr((d / "metallic.exr").string());
  auto same_size = [&](const Image& img) {
    return img.width == base.width && img.height == base.height;
  };
  if (!same_size(rough) || !same_size(metal)) {
    throw LayoutMismatch(dir + ": parameter maps differ in size");
  }
  MaterialTextures t(base.width, base.height);
  Image ent, mask;
  if (fs::exists(d / "entropy.exr")) ent = read_exr((d / "entropy.exr").string());
  if (fs::exists(d / "valid.exr")) mask = read_exr((d / "valid.exr").string());
  if ((!ent.empty() && !same_size(ent)) || (!mask.empty() && !same_size(mask))) {
    throw LayoutMismatch(dir + ": entropy or validity map differs in size");
  }
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      const std::size_t i = t.index(x, y);
      t.params[i].base_color = base.rgb(x, y);
      t.params[i].roughness = rough.at(x, y);
      t.params[i].metallic = metal.at(x, y);
      t.entropy[i] = ent.empty() ? 1.0 : ent.at(x, y);
      t.valid[i] = mask.empty() ? 1 : (mask.at(x, y) > 0.5f ? 1 : 0);
    }
  }
  return t;
}

double texel_error(const PrincipledParams& a, const PrincipledParams& b) {
  const double dc = (a.base_color - b.base_color).squaredNorm() / 3.0;
  const double dr = (a.roughness - b.roughness) * (a.roughness - b.roughness);
  const double dm = (a.metallic - b.metallic) * (a.metallic - b.metallic);
  return (dc + dr + dm) / 3.0;
}

double parameter_mse(const MaterialTextures& estimate,
                     const MaterialTextures& truth) {
  if (estimate.width != truth.width || estimate.height != truth.height) {
    throw LayoutMismatch("estimate and ground truth differ in resolution");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.params.size(); ++i) {
    if (!truth.valid[i]) continue;
    sum += texel_error(estimate.params[i], truth.params[i]);
    ++count;
  }
  return count ? sum / count : 0.0;
}

MaterialTextures merge_textures(const std::vector<MaterialTextures>& runs) {
  if (runs.empty()) throw InvalidInput("nothing to merge");
  for (const MaterialTextures& r : runs) {
    if (r.width != runs[0].width || r.height != runs[0].height) {
      throw LayoutMismatch("runs differ in texture resolution");
    }
  }
  MaterialTextures out = runs[0];
  std::vector<std::pair<std::size_t, double>> candidates;
  for (std::size_t i = 0; i < out.params.size(); ++i) {
    candidates.clear();
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (runs[r].valid[i]) candidates.emplace_back(r, runs[r].entropy[i]);
    }
    if (candidates.empty()) continue;
    const std::size_t r = merge_by_entropy<std::size_t>(candidates);
    out.params[i] = runs[r].params[i];
    out.entropy[i] = runs[r].entropy[i];
    out.valid[i] = 1;
  }
  return out;
}

}  // namespace freqbrdf
