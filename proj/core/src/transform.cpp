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

#include "augforge/transform.hpp"

#include <cmath>

#include "augforge/camera.hpp"
#include "augforge/error.hpp"

namespace augforge {

RigidTransform RigidTransform::from_row_major(const std::array<double, 16>& m) {
  RigidTransform t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) t.rotation(r, c) = m[r * 4 + c];
    t.translation(r) = m[r * 4 + 3];
  }
  return t;
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

std::array<double, 16> RigidTransform::to_row_major() const {
  std::array<double, 16> out{};
  const Mat4 m = matrix();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r * 4 + c] = m(r, c);
  }
  return out;
}

bool RigidTransform::is_proper(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvariantError("camera focal lengths must be positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw InvariantError("camera principal point must be finite");
  }
  if (!pose.is_proper()) {
    throw InvariantError("camera pose rotation is not orthonormal with det +1");
  }
}

CameraModel CameraModel::look_at(double fx, double fy, double cx, double cy,
                                 const Vec3& eye, const Vec3& target,
                                 const Vec3& up) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = z.cross(up);
  if (x.norm() < 1e-12) x = z.cross(Vec3::UnitY());
  x.normalize();
  const Vec3 y = z.cross(x);
  CameraModel cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = cx;
  cam.cy = cy;
  cam.pose.rotation.col(0) = x;
  cam.pose.rotation.col(1) = y;
  cam.pose.rotation.col(2) = z;
  cam.pose.translation = eye;
  return cam;
}

std::optional<Projection> project_point(const CameraModel& camera, const Vec3& world) {
  const Vec3 p = camera.pose.rotation.transpose() * (world - camera.pose.translation);
  if (p.z() <= 1e-9) return std::nullopt;
  return Projection{camera.fx * p.x() / p.z() + camera.cx,
                    camera.fy * p.y() / p.z() + camera.cy, p.z()};
}

Vec3 pixel_ray(const CameraModel& camera, double u, double v) {
  return {(u - camera.cx) / camera.fx, (v - camera.cy) / camera.fy, 1.0};
}

Vec3 back_project(const CameraModel& camera, double u, double v, double depth) {
  return camera.pose.apply(pixel_ray(camera, u, v) * depth);
}

}  // namespace augforge
