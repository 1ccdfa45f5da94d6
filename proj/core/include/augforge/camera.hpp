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

#ifndef AUGFORGE_CAMERA_HPP_
#define AUGFORGE_CAMERA_HPP_

#include <optional>

#include "augforge/transform.hpp"

namespace augforge {

// Pinhole camera. The pose maps camera-frame points into the world. Camera
// axes follow the usual vision convention: +x right, +y down, +z forward.
// Pixel (i, j) has its center at continuous coordinates (i, j).
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  RigidTransform pose;

  // Throws InvariantError unless focal lengths are positive and the pose
  // rotation is proper.
  void validate() const;

  // Camera placed at `eye` looking at `target`; `up` picks the roll so that
  // world-up points toward the top of the image.
  static CameraModel look_at(double fx, double fy, double cx, double cy,
                             const Vec3& eye, const Vec3& target,
                             const Vec3& up = Vec3::UnitZ());
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Points at or behind the camera plane (camera z <= 1e-9) yield nullopt.
std::optional<Projection> project_point(const CameraModel& camera, const Vec3& world);

// Inverse of project_point for a known camera-frame depth.
Vec3 back_project(const CameraModel& camera, double u, double v, double depth);

// Camera-frame ray direction through (u, v), with z component 1.
Vec3 pixel_ray(const CameraModel& camera, double u, double v);

}  // namespace augforge

#endif  // AUGFORGE_CAMERA_HPP_
