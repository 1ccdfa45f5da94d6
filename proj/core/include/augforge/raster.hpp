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

// Software z-buffer rasterization of triangle meshes into depth + coverage.
//
// Coverage rule: a pixel is covered iff its center lies inside the projected
// triangle, with a top-left tie rule so that pixels on a shared edge belong to
// exactly one triangle. Depth is the camera-frame z of the ray/plane hit at
// the pixel center, which makes it perspective-correct by construction.
// Triangles are clipped against a near plane and never culled.

#ifndef AUGFORGE_RASTER_HPP_
#define AUGFORGE_RASTER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "augforge/camera.hpp"
#include "augforge/episode.hpp"
#include "augforge/image.hpp"

namespace augforge {

using Triangle = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  void append(const TriangleMesh& other);
  TriangleMesh transformed(const RigidTransform& t) const;
};

struct RenderResult {
  DepthMap depth;
  Mask mask;
};

inline constexpr double kNearPlane = 1e-4;

RenderResult render_triangles(std::span<const Vec3> world_vertices,
                              std::span<const Triangle> triangles,
                              const CameraModel& camera, int width, int height);

RenderResult render_mesh_depth(const MeshAsset& mesh, const RigidTransform& pose,
                               const CameraModel& camera, int width, int height);

// Inside `mask` the rendered value, outside it the base value, bit-exact.
DepthMap composite_depth(const DepthMap& base, const DepthMap& rendered, const Mask& mask);

// Closed triangulated primitives used for robot links and synthetic assets.
TriangleMesh make_box_mesh(const Vec3& half_extents);
// At most 128 triangles: 16 segments around the axis, two latitude bands per
// cap. Vertex radii are scaled so the polygonal silhouette straddles the true
// circle.
TriangleMesh make_capsule_mesh(const Vec3& a, const Vec3& b, double radius);

}  // namespace augforge

#endif  // AUGFORGE_RASTER_HPP_
