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

#ifndef AUGFORGE_TRANSFORM_HPP_
#define AUGFORGE_TRANSFORM_HPP_

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace augforge {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) {
    return {Mat3::Identity(), t};
  }
  static RigidTransform from_axis_angle(const Vec3& axis, double angle) {
    return {Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(),
            Vec3::Zero()};
  }
  // Row-major 4x4 homogeneous matrix; the bottom row is ignored.
  static RigidTransform from_row_major(const std::array<double, 16>& m);

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const {
    const Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
  Mat4 matrix() const;
  std::array<double, 16> to_row_major() const;

  // True when R^T R = I and det R = +1 within `tol`.
  bool is_proper(double tol = 1e-9) const;
};

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

}  // namespace augforge

#endif  // AUGFORGE_TRANSFORM_HPP_
