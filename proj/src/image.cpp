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

#include "freqbrdf/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <ImfChannelList.h>
#include <ImfFrameBuffer.h>
#include <ImfHeader.h>
#include <ImfInputFile.h>
#include <ImfOutputFile.h>
#include <ImathBox.h>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

Eigen::Vector3d Image::rgb(int x, int y) const {
  if (channels == 1) return Eigen::Vector3d::Constant(at(x, y, 0));
  return {at(x, y, 0), at(x, y, 1), at(x, y, 2)};
}

void Image::set_rgb(int x, int y, const Eigen::Vector3d& v) {
  if (channels == 1) {
    at(x, y, 0) = static_cast<float>(v(0));
    return;
  }
  for (int c = 0; c < 3; ++c) at(x, y, c) = static_cast<float>(v(c));
}

FileKind detect_file_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  unsigned char b[10] = {0};
  in.read(reinterpret_cast<char*>(b), sizeof(b));
  const auto n = in.gcount();
  if (n >= 4 && b[0] == 0x76 && b[1] == 0x2f && b[2] == 0x31 && b[3] == 0x01)
    return FileKind::kExr;
  if (n >= 4 && b[0] == 0x89 && b[1] == 'P' && b[2] == 'N' && b[3] == 'G')
    return FileKind::kPng;
  if (n >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF)
    return FileKind::kJpeg;
  if (n >= 2 && b[0] == '#' && b[1] == '?') return FileKind::kHdrRadiance;
  return FileKind::kUnknown;
}

Image read_exr(const std::string& path) {
  switch (detect_file_kind(path)) {
    case FileKind::kExr:
      break;
    case FileKind::kPng:
    case FileKind::kJpeg:
      throw NonHdrInput(path + " is an 8-bit image; linear HDR input is required");
    case FileKind::kHdrRadiance:
      throw UnsupportedFormat(path + ": Radiance HDR is not supported, use EXR");
    default:
      throw UnsupportedFormat(path + " is not an OpenEXR file");
  }
  try {
    Imf::InputFile file(path.c_str());
    const Imath::Box2i dw = file.header().dataWindow();
    const int w = dw.max.x - dw.min.x + 1;
    const int h = dw.max.y - dw.min.y + 1;
    const Imf::ChannelList& list = file.header().channels();
    const bool rgb = list.findChannel("R") && list.findChannel("G") &&
                     list.findChannel("B");
    const bool gray = list.findChannel("Y") != nullptr;
    if (!rgb && !gray) {
      throw UnsupportedFormat(path + " has neither R,G,B nor Y channels");
    }
    Image img(w, h, rgb ? 3 : 1);
    Imf::FrameBuffer fb;
    const std::size_t xs = sizeof(float) * img.channels;
    const std::size_t ys = xs * static_cast<std::size_t>(w);
    char* base = reinterpret_cast<char*>(img.data.data()) -
                 static_cast<std::ptrdiff_t>(dw.min.x) * xs -
                 static_cast<std::ptrdiff_t>(dw.min.y) * ys;
    if (rgb) {
      const char* names[3] = {"R", "G", "B"};
      for (int c = 0; c < 3; ++c) {
        fb.insert(names[c], Imf::Slice(Imf::FLOAT, base + c * sizeof(float),
                                       xs, ys));
      }
    } else {
      fb.insert("Y", Imf::Slice(Imf::FLOAT, base, xs, ys));
    }
    file.setFrameBuffer(fb);
    file.readPixels(dw.min.y, dw.max.y);
    return img;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw IoFailure(path + ": " + e.what());
  }
}

void write_exr(const std::string& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw IoFailure("EXR export supports 1 or 3 channels");
  }
  try {
    Imf::Header header(image.width, image.height);
    header.compression() = Imf::ZIP_COMPRESSION;
    const char* names3[3] = {"R", "G", "B"};
    const char* name1 = "Y";
    for (int c = 0; c < image.channels; ++c) {
      header.channels().insert(image.channels == 3 ? names3[c] : name1,
                               Imf::Channel(Imf::FLOAT));
    }
    Imf::OutputFile file(path.c_str(), header);
    Imf::FrameBuffer fb;
    const std::size_t xs = sizeof(float) * image.channels;
    const std::size_t ys = xs * static_cast<std::size_t>(image.width);
    char* base = const_cast<char*>(
        reinterpret_cast<const char*>(image.data.data()));
    for (int c = 0; c < image.channels; ++c) {
      fb.insert(image.channels == 3 ? names3[c] : name1,
                Imf::Slice(Imf::FLOAT, base + c * sizeof(float), xs, ys));
    }
    file.setFrameBuffer(fb);
    file.writePixels(image.height);
  } catch (const std::exception& e) {
    throw IoFailure(path + ": " + e.what());
  }
}

namespace {

unsigned char encode_srgb(float linear) {
  const double v = std::clamp(static_cast<double>(linear), 0.0, 1.0);
  const double s = v <= 0.0031308 ? 12.92 * v
                                  : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
  return static_cast<unsigned char>(std::lround(s * 255.0));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_png_srgb(const std::string& path, const Image& image) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoFailure("cannot write " + path);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoFailure("libpng initialisation failed");
  }
  std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 3);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoFailure("libpng failed writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Eigen::Vector3d c = image.rgb(x, y);
      for (int k = 0; k < 3; ++k) {
        row[static_cast<std::size_t>(x) * 3 + k] =
            encode_srgb(static_cast<float>(c(k)));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image read_png(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoFailure("cannot read PNG " + path);
  }
  img.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoFailure("cannot decode PNG " + path);
  }
  Image out(static_cast<int>(img.width), static_cast<int>(img.height), 3);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = buf[i] / 255.0f;
  }
  return out;
}

}  // namespace freqbrdf
