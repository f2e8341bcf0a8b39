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

#ifndef FREQBRDF_CAMERA_HPP_
#define FREQBRDF_CAMERA_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "freqbrdf/image.hpp"

namespace freqbrdf {

enum class Projection { kPinhole, kOrthographic };

// Pixel centres sit at half-integer coordinates. For orthographic views fx
// and fy are pixels per world unit.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;
  Projection projection = Projection::kPinhole;
};

// Camera axes follow the OpenCV convention: x right, y down, z forward.
struct CameraView {
  Intrinsics intrinsics;
  Eigen::Matrix4d world_from_camera = Eigen::Matrix4d::Identity();
  Image image;
  std::string image_name;

  Eigen::Matrix3d rotation() const {
    return world_from_camera.topLeftCorner<3, 3>();
  }
  Eigen::Vector3d center() const {
    return world_from_camera.topRightCorner<3, 1>();
  }
  Eigen::Vector3d forward() const { return rotation().col(2); }

  // Continuous pixel coordinates of a world point; empty when the point is
  // behind the camera or outside the image.
  std::optional<Eigen::Vector2d> project(const Eigen::Vector3d& p) const;

  // Ray through pixel coordinates (px, py): origin and unit direction.
  void ray(double px, double py, Eigen::Vector3d& origin,
           Eigen::Vector3d& direction) const;

  // Unit vector from p towards the camera and the distance to travel along
  // it before reaching the camera (image plane for orthographic views).
  Eigen::Vector3d direction_to_camera(const Eigen::Vector3d& p) const;
  double distance_to_camera(const Eigen::Vector3d& p) const;

  // Throws InvalidInput when the rotation is not orthonormal within 1e-6 or
  // a loaded image disagrees with the intrinsics.
  void validate() const;
};

// Camera at eye looking at target with the given up hint.
CameraView look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                   const Eigen::Vector3d& up, const Intrinsics& intrinsics);

// Pinhole intrinsics with the given horizontal field of view.
Intrinsics pinhole_intrinsics(int width, int height, double fov_radians);

// Reads the camera list. When images_dir is non-empty every view loads its
// image from images_dir/<image> (or images_dir/view_%03d.exr when no name
// is given). Throws IoFailure, InvalidInput, NonHdrInput or
// UnsupportedFormat.
std::vector<CameraView> read_cameras(const std::string& path,
                                     const std::string& images_dir = "");

// Writes the camera list; images are not written.
void write_cameras(const std::string& path,
                   const std::vector<CameraView>& views);

std::string default_image_name(int index);

}  // namespace freqbrdf

#endif  // FREQBRDF_CAMERA_HPP_
