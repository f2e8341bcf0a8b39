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

#ifndef FREQBRDF_IMAGE_HPP_
#define FREQBRDF_IMAGE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace freqbrdf {

// Linear float image, interleaved channels, row 0 at the top.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  Eigen::Vector3d rgb(int x, int y) const;
  void set_rgb(int x, int y, const Eigen::Vector3d& v);
  bool empty() const { return data.empty(); }
};

enum class FileKind { kExr, kPng, kJpeg, kHdrRadiance, kUnknown };

// Sniffs the file signature. Throws IoFailure if the file cannot be read.
FileKind detect_file_kind(const std::string& path);

// Reads R, G, B (or Y) channels as 32-bit floats. Throws NonHdrInput for
// 8-bit formats, UnsupportedFormat for anything else that is not EXR and
// IoFailure on read errors.
Image read_exr(const std::string& path);

// Lossless 32-bit float EXR with channels R, G, B (three channels) or Y (one
// channel). Throws IoFailure.
void write_exr(const std::string& path, const Image& image);

// 8-bit sRGB-encoded PNG preview of an RGB image. Throws IoFailure.
void write_png_srgb(const std::string& path, const Image& image);

// Decodes an 8-bit PNG into [0, 1] floats without removing the sRGB curve.
Image read_png(const std::string& path);

}  // namespace freqbrdf

#endif  // FREQBRDF_IMAGE_HPP_
