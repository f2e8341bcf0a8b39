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

#ifndef FREQBRDF_GEOMETRY_HPP_
#define FREQBRDF_GEOMETRY_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace freqbrdf {

// Triangle mesh with one position, normal and UV per vertex.
struct Mesh {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> normals;
  std::vector<Eigen::Vector2d> uvs;
  std::vector<Eigen::Vector3i> triangles;

  // Throws InvalidInput on inconsistent sizes, bad indices or UVs outside
  // [0, 1].
  void validate() const;
};

// Reads v / vt / vn / f records; faces are fan-triangulated and corners with
// distinct attribute triples become distinct vertices. Throws IoFailure or
// InvalidInput.
Mesh read_obj(const std::string& path);
void write_obj(const std::string& path, const Mesh& mesh);

// Sphere of the given radius. u = phi / 2 pi, v = 1 - theta / pi; the seam
// is duplicated so UVs stay continuous inside every triangle.
Mesh make_uv_sphere(int n_lat, int n_lon, double radius = 1.0);

// Square [-size/2, size/2]^2 in the z = 0 plane facing +z, UVs over [0, 1]^2.
Mesh make_quad(double size = 1.0);

// Orthonormal frame with the given unit normal as third column (Frisvad's
// construction with the singularity handled at n.z = -1).
Eigen::Matrix3d frisvad_frame(const Eigen::Vector3d& normal);

struct RayHit {
  double t = 0.0;
  int triangle = -1;
  double b1 = 0.0;  // barycentric weight of vertex 1
  double b2 = 0.0;  // barycentric weight of vertex 2
};

// Bounding-volume hierarchy over the mesh triangles. Queries are exact and
// deterministic; ties in t go to the lower triangle index.
class Bvh {
 public:
  Bvh() = default;
  explicit Bvh(const Mesh& mesh);

  std::optional<RayHit> intersect(const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& dir, double t_min,
                                  double t_max) const;
  bool occluded(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                double t_min, double t_max) const;

 private:
  struct Node {
    Eigen::Vector3d lo, hi;
    int left = -1, right = -1;  // children, or -1 for leaves
    int first = 0, count = 0;   // triangle range for leaves
  };
  int build(int first, int count, int depth);

  std::vector<Eigen::Vector3d> v0_, e1_, e2_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

// Reference intersection that tests every triangle.
std::optional<RayHit> intersect_brute_force(const Mesh& mesh,
                                            const Eigen::Vector3d& origin,
                                            const Eigen::Vector3d& dir,
                                            double t_min, double t_max);

// Surface point behind one UV texel.
struct TexelSample {
  bool covered = false;
  int triangle = -1;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
};

// Texel (x, y) covers u in [x, x + 1) / W and v in [H - y - 1, H - y) / H,
// so row 0 is the top of the texture (v = 1).
inline Eigen::Vector2d texel_center_uv(int x, int y, int width, int height) {
  return {(x + 0.5) / width, 1.0 - (y + 0.5) / height};
}
// Texel containing uv, clamped to the grid.
Eigen::Vector2i texel_from_uv(const Eigen::Vector2d& uv, int width,
                              int height);

// Mesh, BVH and texel table.
class SurfaceGeometry {
 public:
  SurfaceGeometry(Mesh mesh, int width, int height);
  SurfaceGeometry(const SurfaceGeometry&) = delete;
  SurfaceGeometry& operator=(const SurfaceGeometry&) = delete;

  const Mesh& mesh() const { return mesh_; }
  const Bvh& bvh() const { return bvh_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const TexelSample& texel(int x, int y) const {
    return texels_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::vector<TexelSample>& texels() const { return texels_; }

  // Interpolated surface attributes at a ray hit.
  Eigen::Vector2d hit_uv(const RayHit& hit) const;
  Eigen::Vector3d hit_normal(const RayHit& hit) const;
  // Offset used to leave the surface when casting visibility rays.
  double ray_epsilon() const { return ray_epsilon_; }

 private:
  Mesh mesh_;
  Bvh bvh_;
  int width_, height_;
  std::vector<TexelSample> texels_;
  double ray_epsilon_ = 1e-6;
};

}  // namespace freqbrdf

#endif  // FREQBRDF_GEOMETRY_HPP_
