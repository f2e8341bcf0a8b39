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

#include "freqbrdf/camera.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include <Eigen/Geometry>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

using nlohmann::json;

std::optional<Eigen::Vector2d> CameraView::project(
    const Eigen::Vector3d& p) const {
  const Eigen::Vector3d q = rotation().transpose() * (p - center());
  const Intrinsics& k = intrinsics;
  Eigen::Vector2d px;
  if (k.projection == Projection::kPinhole) {
    if (q.z() <= 1e-12) return std::nullopt;
    px = {k.fx * q.x() / q.z() + k.cx, k.fy * q.y() / q.z() + k.cy};
  } else {
    if (q.z() <= 0.0) return std::nullopt;
    px = {k.fx * q.x() + k.cx, k.fy * q.y() + k.cy};
  }
  if (px.x() < 0.0 || px.y() < 0.0 || px.x() >= k.width ||
      px.y() >= k.height) {
    return std::nullopt;
  }
  return px;
}

void CameraView::ray(double px, double py, Eigen::Vector3d& origin,
                     Eigen::Vector3d& direction) const {
  const Intrinsics& k = intrinsics;
  if (k.projection == Projection::kPinhole) {
    origin = center();
    direction = (rotation() * Eigen::Vector3d((px - k.cx) / k.fx,
                                              (py - k.cy) / k.fy, 1.0))
                    .normalized();
  } else {
    origin = center() + rotation() * Eigen::Vector3d((px - k.cx) / k.fx,
                                                     (py - k.cy) / k.fy, 0.0);
    direction = forward();
  }
}

Eigen::Vector3d CameraView::direction_to_camera(
    const Eigen::Vector3d& p) const {
  if (intrinsics.projection == Projection::kOrthographic) return -forward();
  return (center() - p).normalized();
}

double CameraView::distance_to_camera(const Eigen::Vector3d& p) const {
  if (intrinsics.projection == Projection::kOrthographic) {
    return forward().dot(p - center());
  }
  return (center() - p).norm();
}

void CameraView::validate() const {
  const Eigen::Matrix3d r = rotation();
  if (!((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <=
        1e-6)) {
    throw InvalidInput("camera rotation is not orthonormal");
  }
  if (!world_from_camera.allFinite()) {
    throw InvalidInput("camera extrinsics are not finite");
  }
  const Intrinsics& k = intrinsics;
  if (k.width < 1 || k.height < 1 || !(k.fx > 0.0) || !(k.fy > 0.0)) {
    throw InvalidInput("camera intrinsics are invalid");
  }
  if (!image.empty() &&
      (image.width != k.width || image.height != k.height)) {
    throw InvalidInput("image size " + std::to_string(image.width) + "x" +
                       std::to_string(image.height) +
                       " differs from the intrinsics");
  }
}

CameraView look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                   const Eigen::Vector3d& up, const Intrinsics& intrinsics) {
  const Eigen::Vector3d z = (target - eye).normalized();
  Eigen::Vector3d x = z.cross(up);
  if (x.norm() < 1e-9) x = z.cross(Eigen::Vector3d::UnitX());
  if (x.norm() < 1e-9) x = z.cross(Eigen::Vector3d::UnitY());
  x.normalize();
  const Eigen::Vector3d y = z.cross(x);
  CameraView v;
  v.intrinsics = intrinsics;
  v.world_from_camera.setIdentity();
  v.world_from_camera.block<3, 1>(0, 0) = x;
  v.world_from_camera.block<3, 1>(0, 1) = y;
  v.world_from_camera.block<3, 1>(0, 2) = z;
  v.world_from_camera.block<3, 1>(0, 3) = eye;
  return v;
}

Intrinsics pinhole_intrinsics(int width, int height, double fov_radians) {
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = k.fy = 0.5 * width / std::tan(0.5 * fov_radians);
  k.cx = 0.5 * width;
  k.cy = 0.5 * height;
  return k;
}

std::string default_image_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "view_%03d.exr", index);
  return buf;
}

std::vector<CameraView> read_cameras(const std::string& path,
                                     const std::string& images_dir) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open camera file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InvalidInput("camera file " + path + " is not valid JSON: " +
                       e.what());
  }
  const json& list = doc.is_array() ? doc : doc.value("cameras", json());
  if (!list.is_array() || list.empty()) {
    throw InvalidInput("camera file " + path + " lists no cameras");
  }
  std::vector<CameraView> views;
  int index = 0;
  for (const json& c : list) {
    try {
      CameraView v;
      const json& k = c.at("intrinsics");
      v.intrinsics.fx = k.at("fx").get<double>();
      v.intrinsics.fy = k.at("fy").get<double>();
      v.intrinsics.cx = k.at("cx").get<double>();
      v.intrinsics.cy = k.at("cy").get<double>();
      v.intrinsics.width = k.at("width").get<int>();
      v.intrinsics.height = k.at("height").get<int>();
      const std::string proj = k.value("projection", std::string("pinhole"));
      if (proj == "orthographic") {
        v.intrinsics.projection = Projection::kOrthographic;
      } else if (proj != "pinhole") {
        throw InvalidInput("unknown projection " + proj);
      }
      const json& e = c.at("extrinsics");
      if (!e.is_array() || e.size() != 16) {
        throw InvalidInput("extrinsics must hold 16 numbers");
      }
      for (int i = 0; i < 16; ++i) {
        v.world_from_camera(i / 4, i % 4) = e.at(i).get<double>();
      }
      v.image_name = c.value("image", default_image_name(index));
      if (!images_dir.empty()) {
        const std::filesystem::path p =
            std::filesystem::path(images_dir) / v.image_name;
        if (!std::filesystem::exists(p)) {
          throw IoFailure("missing image " + p.string());
        }
        v.image = read_exr(p.string());
        if (v.image.channels != 3) {
          throw InvalidInput(p.string() + " must be an RGB image");
        }
      }
      v.validate();
      views.push_back(std::move(v));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      throw InvalidInput("camera " + std::to_string(index) + " in " + path +
                         ": " + ex.what());
    }
    ++index;
  }
  return views;
}

void write_cameras(const std::string& path,
                   const std::vector<CameraView>& views) {
  json list = json::array();
  for (std::size_t i = 0; i < views.size(); ++i) {
    const CameraView& v = views[i];
    json k = {{"fx", v.intrinsics.fx},        {"fy", v.intrinsics.fy},
              {"cx", v.intrinsics.cx},        {"cy", v.intrinsics.cy},
              {"width", v.intrinsics.width},  {"height", v.intrinsics.height}};
    if (v.intrinsics.projection == Projection::kOrthographic) {
      k["projection"] = "orthographic";
    }
    json e = json::array();
    for (int r = 0; r < 16; ++r) e.push_back(v.world_from_camera(r / 4, r % 4));
    list.push_back({{"intrinsics", k},
                    {"extrinsics", e},
                    {"image", v.image_name.empty()
                                  ? default_image_name(static_cast<int>(i))
                                  : v.image_name}});
  }
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path);
  out << json{{"cameras", list}}.dump(2) << "\n";
  if (!out) throw IoFailure("failed writing " + path);
}

}  // namespace freqbrdf
