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

#include "freqbrdf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Geometry>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

namespace {
constexpr double kPi = std::numbers::pi;
}

void Mesh::validate() const {
  const std::size_t n = positions.size();
  if (normals.size() != n || uvs.size() != n) {
    throw InvalidInput("mesh needs one normal and one UV per vertex");
  }
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t(k) < 0 || static_cast<std::size_t>(t(k)) >= n) {
        throw InvalidInput("mesh triangle index out of range");
      }
    }
  }
  for (const auto& uv : uvs) {
    if (!(uv.x() >= -1e-9 && uv.x() <= 1 + 1e-9 && uv.y() >= -1e-9 &&
          uv.y() <= 1 + 1e-9)) {
      throw InvalidInput("mesh UVs must lie in [0, 1]^2");
    }
  }
  for (const auto& nn : normals) {
    if (!nn.allFinite() || std::abs(nn.norm() - 1.0) > 1e-6) {
      throw InvalidInput("mesh normals must have unit length");
    }
  }
}

Mesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open mesh " + path);
  std::vector<Eigen::Vector3d> pos, nor;
  std::vector<Eigen::Vector2d> tex;
  std::map<std::tuple<int, int, int>, int> corner_index;
  Mesh mesh;
  std::string line;
  int line_no = 0;
  auto resolve = [](int idx, std::size_t size) {
    return idx < 0 ? static_cast<int>(size) + idx : idx - 1;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      ls >> p.x() >> p.y() >> p.z();
      pos.push_back(p);
    } else if (tag == "vt") {
      Eigen::Vector2d t;
      ls >> t.x() >> t.y();
      tex.push_back(t);
    } else if (tag == "vn") {
      Eigen::Vector3d n;
      ls >> n.x() >> n.y() >> n.z();
      nor.push_back(n);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string tok;
      while (ls >> tok) {
        int vi = 0, ti = 0, ni = 0;
        const int matched =
            std::sscanf(tok.c_str(), "%d/%d/%d", &vi, &ti, &ni);
        if (matched < 3 && std::sscanf(tok.c_str(), "%d//%d", &vi, &ni) == 2) {
          ti = 0;
        } else if (matched < 1) {
          throw InvalidInput(path + ":" + std::to_string(line_no) +
                             ": bad face token " + tok);
        }
        const int v = resolve(vi, pos.size());
        const int t = ti == 0 ? -1 : resolve(ti, tex.size());
        const int n = ni == 0 ? -1 : resolve(ni, nor.size());
        if (v < 0 || v >= static_cast<int>(pos.size()) ||
            t >= static_cast<int>(tex.size()) ||
            n >= static_cast<int>(nor.size())) {
          throw InvalidInput(path + ":" + std::to_string(line_no) +
                             ": face index out of range");
        }
        if (t < 0) {
          throw InvalidInput(path + ": faces must reference UV coordinates");
        }
        const auto key = std::make_tuple(v, t, n);
        auto it = corner_index.find(key);
        if (it == corner_index.end()) {
          it = corner_index
                   .emplace(key, static_cast<int>(mesh.positions.size()))
                   .first;
          mesh.positions.push_back(pos[v]);
          mesh.uvs.push_back(tex[t]);
          mesh.normals.push_back(n >= 0 ? nor[n].normalized()
                                        : Eigen::Vector3d::Zero());
        }
        face.push_back(it->second);
      }
      for (std::size_t k = 2; k < face.size(); ++k) {
        mesh.triangles.emplace_back(face[0], face[k - 1], face[k]);
      }
    }
  }
  // Vertices without normals get area-weighted face normals.
  std::vector<Eigen::Vector3d> acc(mesh.positions.size(),
                                   Eigen::Vector3d::Zero());
  bool missing = false;
  for (const auto& n : mesh.normals) missing |= n.isZero();
  if (missing) {
    for (const auto& t : mesh.triangles) {
      const Eigen::Vector3d fn =
          (mesh.positions[t(1)] - mesh.positions[t(0)])
              .cross(mesh.positions[t(2)] - mesh.positions[t(0)]);
      for (int k = 0; k < 3; ++k) acc[t(k)] += fn;
    }
    for (std::size_t i = 0; i < mesh.normals.size(); ++i) {
      if (mesh.normals[i].isZero()) {
        if (acc[i].norm() == 0.0) {
          throw InvalidInput(path + ": cannot derive a vertex normal");
        }
        mesh.normals[i] = acc[i].normalized();
      }
    }
  }
  if (mesh.triangles.empty()) throw InvalidInput(path + " has no faces");
  mesh.validate();
  return mesh;
}

void write_obj(const std::string& path, const Mesh& mesh) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoFailure("cannot write " + path);
  for (const auto& p : mesh.positions)
    std::fprintf(f, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
  for (const auto& t : mesh.uvs)
    std::fprintf(f, "vt %.17g %.17g\n", t.x(), t.y());
  for (const auto& n : mesh.normals)
    std::fprintf(f, "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
  for (const auto& t : mesh.triangles) {
    std::fprintf(f, "f %d/%d/%d %d/%d/%d %d/%d/%d\n", t(0) + 1, t(0) + 1,
                 t(0) + 1, t(1) + 1, t(1) + 1, t(1) + 1, t(2) + 1, t(2) + 1,
                 t(2) + 1);
  }
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw IoFailure("failed writing " + path);
}

Mesh make_uv_sphere(int n_lat, int n_lon, double radius) {
  if (n_lat < 2 || n_lon < 3) throw InvalidInput("sphere too coarse");
  Mesh m;
  auto id = [n_lon](int i, int j) { return i * (n_lon + 1) + j; };
  for (int i = 0; i <= n_lat; ++i) {
    const double theta = kPi * i / n_lat;
    for (int j = 0; j <= n_lon; ++j) {
      // Pole vertices sit mid-column so texel centres next to the poles
      // fall inside the pole triangles.
      const bool pole = i == 0 || i == n_lat;
      const double u = pole ? (j + 0.5) / n_lon : double(j) / n_lon;
      const double phi = 2.0 * kPi * u;
      Eigen::Vector3d n(std::sin(theta) * std::cos(phi),
                        std::sin(theta) * std::sin(phi), std::cos(theta));
      if (pole) n = Eigen::Vector3d(0, 0, i == 0 ? 1.0 : -1.0);
      m.positions.push_back(radius * n);
      m.normals.push_back(n);
      m.uvs.emplace_back(std::min(u, 1.0), 1.0 - double(i) / n_lat);
    }
  }
  for (int i = 0; i < n_lat; ++i) {
    for (int j = 0; j < n_lon; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      if (i == 0) {
        m.triangles.emplace_back(a, b, c);
      } else if (i == n_lat - 1) {
        m.triangles.emplace_back(a, b, d);
      } else {
        m.triangles.emplace_back(a, b, c);
        m.triangles.emplace_back(a, c, d);
      }
    }
  }
  return m;
}

Mesh make_quad(double size) {
  Mesh m;
  const double h = 0.5 * size;
  m.positions = {{-h, -h, 0}, {h, -h, 0}, {h, h, 0}, {-h, h, 0}};
  m.normals.assign(4, Eigen::Vector3d::UnitZ());
  m.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

Eigen::Matrix3d frisvad_frame(const Eigen::Vector3d& normal) {
  const Eigen::Vector3d n = normal.normalized();
  Eigen::Vector3d t, b;
  if (n.z() < -0.9999999) {
    t = {0.0, -1.0, 0.0};
    b = {-1.0, 0.0, 0.0};
  } else {
    const double a = 1.0 / (1.0 + n.z());
    const double c = -n.x() * n.y() * a;
    t = {1.0 - n.x() * n.x() * a, c, -n.x()};
    b = {c, 1.0 - n.y() * n.y() * a, -n.y()};
  }
  Eigen::Matrix3d f;
  f.col(0) = t;
  f.col(1) = b;
  f.col(2) = n;
  return f;
}

namespace {

// Two-sided Moller-Trumbore test.
bool intersect_triangle(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                        const Eigen::Vector3d& v0, const Eigen::Vector3d& e1,
                        const Eigen::Vector3d& e2, double& t, double& b1,
                        double& b2) {
  const Eigen::Vector3d p = d.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) return false;
  const double inv = 1.0 / det;
  const Eigen::Vector3d s = o - v0;
  b1 = s.dot(p) * inv;
  if (b1 < 0.0 || b1 > 1.0) return false;
  const Eigen::Vector3d q = s.cross(e1);
  b2 = d.dot(q) * inv;
  if (b2 < 0.0 || b1 + b2 > 1.0) return false;
  t = e2.dot(q) * inv;
  return true;
}

bool hits_box(const Eigen::Vector3d& o, const Eigen::Vector3d& inv_d,
              const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
              double t_min, double t_max) {
  for (int a = 0; a < 3; ++a) {
    double t0 = (lo(a) - o(a)) * inv_d(a);
    double t1 = (hi(a) - o(a)) * inv_d(a);
    if (t0 > t1) std::swap(t0, t1);
    if (std::isnan(t0)) t0 = -INFINITY;
    if (std::isnan(t1)) t1 = INFINITY;
    t_min = std::max(t_min, t0);
    t_max = std::min(t_max, t1);
    if (t_min > t_max) return false;
  }
  return true;
}

}  // namespace

Bvh::Bvh(const Mesh& mesh) {
  const std::size_t n = mesh.triangles.size();
  v0_.resize(n);
  e1_.resize(n);
  e2_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    v0_[i] = mesh.positions[t(0)];
    e1_[i] = mesh.positions[t(1)] - v0_[i];
    e2_[i] = mesh.positions[t(2)] - v0_[i];
  }
  order_.resize(n);
  for (std::size_t i = 0; i < n; ++i) order_[i] = static_cast<int>(i);
  if (n > 0) build(0, static_cast<int>(n), 0);
}

int Bvh::build(int first, int count, int depth) {
  Node node;
  node.lo = Eigen::Vector3d::Constant(INFINITY);
  node.hi = Eigen::Vector3d::Constant(-INFINITY);
  for (int i = first; i < first + count; ++i) {
    const int t = order_[i];
    for (const Eigen::Vector3d& p :
         {v0_[t], Eigen::Vector3d(v0_[t] + e1_[t]),
          Eigen::Vector3d(v0_[t] + e2_[t])}) {
      node.lo = node.lo.cwiseMin(p);
      node.hi = node.hi.cwiseMax(p);
    }
  }
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (count <= 4 || depth > 60) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  int axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  auto centroid = [&](int t) {
    return v0_[t](axis) + (e1_[t](axis) + e2_[t](axis)) / 3.0;
  };
  const int mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid,
                   order_.begin() + first + count, [&](int a, int b) {
                     const double ca = centroid(a), cb = centroid(b);
                     return ca < cb || (ca == cb && a < b);
                   });
  const int left = build(first, mid - first, depth + 1);
  const int right = build(mid, first + count - mid, depth + 1);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

std::optional<RayHit> Bvh::intersect(const Eigen::Vector3d& origin,
                                     const Eigen::Vector3d& dir, double t_min,
                                     double t_max) const {
  if (nodes_.empty()) return std::nullopt;
  const Eigen::Vector3d inv_d = dir.cwiseInverse();
  std::optional<RayHit> best;
  double best_t = t_max;
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!hits_box(origin, inv_d, node.lo, node.hi, t_min, best_t)) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int tri = order_[i];
        double t, b1, b2;
        if (!intersect_triangle(origin, dir, v0_[tri], e1_[tri], e2_[tri], t,
                                b1, b2)) {
          continue;
        }
        if (t < t_min || t > best_t) continue;
        if (best && t == best_t && tri > best->triangle) continue;
        best_t = t;
        best = RayHit{t, tri, b1, b2};
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
  return best;
}

bool Bvh::occluded(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   double t_min, double t_max) const {
  if (nodes_.empty()) return false;
  const Eigen::Vector3d inv_d = dir.cwiseInverse();
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!hits_box(origin, inv_d, node.lo, node.hi, t_min, t_max)) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int tri = order_[i];
        double t, b1, b2;
        if (intersect_triangle(origin, dir, v0_[tri], e1_[tri], e2_[tri], t,
                               b1, b2) &&
            t >= t_min && t <= t_max) {
          return true;
        }
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
  return false;
}

std::optional<RayHit> intersect_brute_force(const Mesh& mesh,
                                            const Eigen::Vector3d& origin,
                                            const Eigen::Vector3d& dir,
                                            double t_min, double t_max) {
  std::optional<RayHit> best;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& tr = mesh.triangles[i];
    const Eigen::Vector3d v0 = mesh.positions[tr(0)];
    double t, b1, b2;
    if (!intersect_triangle(origin, dir, v0, mesh.positions[tr(1)] - v0,
                            mesh.positions[tr(2)] - v0, t, b1, b2)) {
      continue;
    }
    if (t < t_min || t > t_max) continue;
    if (!best || t < best->t) best = RayHit{t, static_cast<int>(i), b1, b2};
  }
  return best;
}

Eigen::Vector2i texel_from_uv(const Eigen::Vector2d& uv, int width,
                              int height) {
  const int x = std::clamp(static_cast<int>(std::floor(uv.x() * width)), 0,
                           width - 1);
  const int y = std::clamp(
      static_cast<int>(std::floor((1.0 - uv.y()) * height)), 0, height - 1);
  return {x, y};
}

SurfaceGeometry::SurfaceGeometry(Mesh mesh, int width, int height)
    : mesh_(std::move(mesh)), width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidInput("texture size must be >= 1");
  mesh_.validate();
  bvh_ = Bvh(mesh_);
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(INFINITY);
  Eigen::Vector3d hi = -lo;
  for (const auto& p : mesh_.positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  ray_epsilon_ = 1e-5 * std::max((hi - lo).norm(), 1e-9);

  texels_.assign(static_cast<std::size_t>(width) * height, TexelSample{});
  for (std::size_t ti = 0; ti < mesh_.triangles.size(); ++ti) {
    const auto& t = mesh_.triangles[ti];
    const Eigen::Vector2d a = mesh_.uvs[t(0)], b = mesh_.uvs[t(1)],
                          c = mesh_.uvs[t(2)];
    const double det =
        (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (std::abs(det) < 1e-18) continue;
    const double umin = std::min({a.x(), b.x(), c.x()});
    const double umax = std::max({a.x(), b.x(), c.x()});
    const double vmin = std::min({a.y(), b.y(), c.y()});
    const double vmax = std::max({a.y(), b.y(), c.y()});
    const int x0 = std::max(0, static_cast<int>(std::floor(umin * width)) - 1);
    const int x1 =
        std::min(width - 1, static_cast<int>(std::ceil(umax * width)) + 1);
    const int y0 = std::max(
        0, static_cast<int>(std::floor((1.0 - vmax) * height)) - 1);
    const int y1 = std::min(
        height - 1, static_cast<int>(std::ceil((1.0 - vmin) * height)) + 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        TexelSample& s = texels_[static_cast<std::size_t>(y) * width + x];
        if (s.covered) continue;
        const Eigen::Vector2d p = texel_center_uv(x, y, width, height) - a;
        const double w1 = (p.x() * (c - a).y() - p.y() * (c - a).x()) / det;
        const double w2 = ((b - a).x() * p.y() - (b - a).y() * p.x()) / det;
        const double w0 = 1.0 - w1 - w2;
        constexpr double kTol = -1e-9;
        if (w0 < kTol || w1 < kTol || w2 < kTol) continue;
        s.covered = true;
        s.triangle = static_cast<int>(ti);
        s.position = w0 * mesh_.positions[t(0)] + w1 * mesh_.positions[t(1)] +
                     w2 * mesh_.positions[t(2)];
        const Eigen::Vector3d n = w0 * mesh_.normals[t(0)] +
                                  w1 * mesh_.normals[t(1)] +
                                  w2 * mesh_.normals[t(2)];
        s.frame = frisvad_frame(n.normalized());
      }
    }
  }
}

Eigen::Vector2d SurfaceGeometry::hit_uv(const RayHit& hit) const {
  const auto& t = mesh_.triangles[static_cast<std::size_t>(hit.triangle)];
  return (1.0 - hit.b1 - hit.b2) * mesh_.uvs[t(0)] + hit.b1 * mesh_.uvs[t(1)] +
         hit.b2 * mesh_.uvs[t(2)];
}

Eigen::Vector3d SurfaceGeometry::hit_normal(const RayHit& hit) const {
  const auto& t = mesh_.triangles[static_cast<std::size_t>(hit.triangle)];
  return ((1.0 - hit.b1 - hit.b2) * mesh_.normals[t(0)] +
          hit.b1 * mesh_.normals[t(1)] + hit.b2 * mesh_.normals[t(2)])
      .normalized();
}

}  // namespace freqbrdf
