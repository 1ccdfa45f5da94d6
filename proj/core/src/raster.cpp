// Copyright 2026 The augforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace augforge {
namespace {

struct ScreenVertex {
  double x;
  double y;
};

double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// With positive-area orientation in y-down screen space, edges running
// upward, or horizontally to the right, are the top and left edges.
bool is_top_left(const ScreenVertex& a, const ScreenVertex& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dy < 0.0 || (dy == 0.0 && dx > 0.0);
}

bool inside(double w, bool top_left) { return w > 0.0 || (w == 0.0 && top_left); }

// Sutherland-Hodgman against z >= kNearPlane. Returns 0, 3 or 4 vertices.
int clip_near(const std::array<Vec3, 3>& tri, std::array<Vec3, 4>& out) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& cur = tri[i];
    const Vec3& nxt = tri[(i + 1) % 3];
    const bool cur_in = cur.z() >= kNearPlane;
    const bool nxt_in = nxt.z() >= kNearPlane;
    if (cur_in) out[n++] = cur;
    if (cur_in != nxt_in) {
      const double t = (kNearPlane - cur.z()) / (nxt.z() - cur.z());
      Vec3 p = cur + t * (nxt - cur);
      p.z() = kNearPlane;
      out[n++] = p;
    }
  }
  return n;
}

class DepthTarget {
 public:
  DepthTarget(const CameraModel& camera, int width, int height)
      : camera_(camera),
        width_(width),
        height_(height),
        z_(static_cast<std::size_t>(width) * height,
           std::numeric_limits<double>::infinity()) {}

  // `plane_point` and `normal` describe the unclipped triangle's plane in
  // the camera frame.
  void raster(const Vec3& c0, const Vec3& c1, const Vec3& c2, const Vec3& plane_point,
              const Vec3& normal) {
    ScreenVertex v0{camera_.fx * c0.x() / c0.z() + camera_.cx,
                    camera_.fy * c0.y() / c0.z() + camera_.cy};
    ScreenVertex v1{camera_.fx * c1.x() / c1.z() + camera_.cx,
                    camera_.fy * c1.y() / c1.z() + camera_.cy};
    ScreenVertex v2{camera_.fx * c2.x() / c2.z() + camera_.cx,
                    camera_.fy * c2.y() / c2.z() + camera_.cy};
    const double area = edge(v0, v1, v2.x, v2.y);
    if (area == 0.0 || !std::isfinite(area)) return;
    if (area < 0.0) std::swap(v1, v2);

    const double min_x = std::min({v0.x, v1.x, v2.x});
    const double max_x = std::max({v0.x, v1.x, v2.x});
    const double min_y = std::min({v0.y, v1.y, v2.y});
    const double max_y = std::max({v0.y, v1.y, v2.y});
    const int x_begin = std::max(0, static_cast<int>(std::ceil(std::max(min_x, -1.0))));
    const int y_begin = std::max(0, static_cast<int>(std::ceil(std::max(min_y, -1.0))));
    const int x_end = std::min(width_ - 1, static_cast<int>(std::floor(std::min(max_x, 1e9))));
    const int y_end = std::min(height_ - 1, static_cast<int>(std::floor(std::min(max_y, 1e9))));
    if (x_begin > x_end || y_begin > y_end) return;

    const bool tl0 = is_top_left(v1, v2);
    const bool tl1 = is_top_left(v2, v0);
    const bool tl2 = is_top_left(v0, v1);
    const double plane_offset = normal.dot(plane_point);

    for (int y = y_begin; y <= y_end; ++y) {
      for (int x = x_begin; x <= x_end; ++x) {
        const double px = x;
        const double py = y;
        if (!inside(edge(v1, v2, px, py), tl0) || !inside(edge(v2, v0, px, py), tl1) ||
            !inside(edge(v0, v1, px, py), tl2)) {
          continue;
        }
        const Vec3 ray = pixel_ray(camera_, px, py);
        const double denom = normal.dot(ray);
        if (denom == 0.0) continue;
        const double z = plane_offset / denom;
        if (!(z > 0.0) || !std::isfinite(z)) continue;
        double& slot = z_[static_cast<std::size_t>(y) * width_ + x];
        if (z < slot) slot = z;
      }
    }
  }

  RenderResult finish() const {
    RenderResult out{DepthMap(width_, height_), Mask(width_, height_)};
    auto depth = out.depth.values();
    for (std::size_t i = 0; i < z_.size(); ++i) {
      if (std::isfinite(z_[i])) {
        depth[i] = static_cast<float>(z_[i]);
        out.mask.set_index(i);
      }
    }
    return out;
  }

 private:
  const CameraModel& camera_;
  int width_;
  int height_;
  std::vector<double> z_;
};

}  // namespace

void TriangleMesh::append(const TriangleMesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const Triangle& t : other.triangles) {
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
}

TriangleMesh TriangleMesh::transformed(const RigidTransform& t) const {
  TriangleMesh out = *this;
  for (Vec3& v : out.vertices) v = t.apply(v);
  return out;
}

RenderResult render_triangles(std::span<const Vec3> world_vertices,
                              std::span<const Triangle> triangles,
                              const CameraModel& camera, int width, int height) {
  DepthTarget target(camera, width, height);
  const Mat3 rt = camera.pose.rotation.transpose();
  std::vector<Vec3> cam(world_vertices.size());
  for (std::size_t i = 0; i < world_vertices.size(); ++i) {
    cam[i] = rt * (world_vertices[i] - camera.pose.translation);
  }
  std::array<Vec3, 4> clipped;
  for (const Triangle& t : triangles) {
    const std::array<Vec3, 3> tri{cam[t[0]], cam[t[1]], cam[t[2]]};
    const Vec3 normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    if (normal.squaredNorm() == 0.0) continue;
    const int n = clip_near(tri, clipped);
    if (n < 3) continue;
    target.raster(clipped[0], clipped[1], clipped[2], tri[0], normal);
    if (n == 4) target.raster(clipped[0], clipped[2], clipped[3], tri[0], normal);
  }
  return target.finish();
}

RenderResult render_mesh_depth(const MeshAsset& mesh, const RigidTransform& pose,
                               const CameraModel& camera, int width, int height) {
  std::vector<Vec3> world(mesh.vertices.size());
  for (std::size_t i = 0; i < world.size(); ++i) world[i] = pose.apply(mesh.vertices[i]);
  return render_triangles(world, mesh.triangles, camera, width, height);
}

DepthMap composite_depth(const DepthMap& base, const DepthMap& rendered, const Mask& mask) {
  require_same_dims(base, rendered, "composite_depth rendered");
  require_same_dims(base, mask, "composite_depth mask");
  DepthMap out = base;
  auto dst = out.values();
  auto src = rendered.values();
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask.test_index(i)) dst[i] = src[i];
  }
  return out;
}

TriangleMesh make_box_mesh(const Vec3& h) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                            (i & 4) ? h.z() : -h.z());
  }
  // Two triangles per face, outward winding.
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

TriangleMesh make_capsule_mesh(const Vec3& a, const Vec3& b, double radius) {
  constexpr int kSegments = 16;
  constexpr int kCapBands = 2;
  // Radius at which a regular 16-gon's inscribed and circumscribed widths
  // average to the true diameter.
  const double r = 2.0 * radius / (1.0 + std::cos(std::numbers::pi / kSegments));

  Vec3 axis = b - a;
  const double length = axis.norm();
  axis = length > 0.0 ? Vec3(axis / length) : Vec3::UnitZ();
  Vec3 u = axis.unitOrthogonal();
  Vec3 v = axis.cross(u);

  TriangleMesh m;
  auto ring = [&](const Vec3& center, double ring_radius) {
    const auto start = static_cast<std::uint32_t>(m.vertices.size());
    for (int s = 0; s < kSegments; ++s) {
      const double phi = 2.0 * std::numbers::pi * s / kSegments;
      m.vertices.push_back(center + ring_radius * (std::cos(phi) * u + std::sin(phi) * v));
    }
    return start;
  };
  auto band = [&](std::uint32_t r0, std::uint32_t r1) {
    for (std::uint32_t s = 0; s < kSegments; ++s) {
      const std::uint32_t n = (s + 1) % kSegments;
      m.triangles.push_back({r0 + s, r0 + n, r1 + s});
      m.triangles.push_back({r0 + n, r1 + n, r1 + s});
    }
  };
  auto fan = [&](std::uint32_t ring_start, const Vec3& apex) {
    const auto apex_index = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back(apex);
    for (std::uint32_t s = 0; s < kSegments; ++s) {
      m.triangles.push_back({ring_start + s, ring_start + (s + 1) % kSegments, apex_index});
    }
  };

  // Cap at `a` (pointing along -axis), cylinder, cap at `b`.
  std::vector<std::uint32_t> rings;
  for (int k = kCapBands - 1; k >= 0; --k) {
    const double theta = std::numbers::pi / 2.0 * k / kCapBands;
    rings.push_back(ring(a - axis * (r * std::sin(theta)), r * std::cos(theta)));
  }
  for (int k = 0; k < kCapBands; ++k) {
    const double theta = std::numbers::pi / 2.0 * k / kCapBands;
    rings.push_back(ring(b + axis * (r * std::sin(theta)), r * std::cos(theta)));
  }
  fan(rings.front(), a - axis * r);
  for (std::size_t i = 0; i + 1 < rings.size(); ++i) band(rings[i], rings[i + 1]);
  fan(rings.back(), b + axis * r);
  return m;
}

}  // namespace augforge
