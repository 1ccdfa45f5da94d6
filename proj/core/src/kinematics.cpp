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

#include "augforge/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "augforge/error.hpp"

namespace augforge {
namespace {

RigidTransform joint_motion(const Joint& joint, double value) {
  if (joint.kind == JointKind::kPrismatic) {
    return RigidTransform::from_translation(joint.axis * value);
  }
  return {Eigen::AngleAxisd(value, joint.axis).toRotationMatrix(), Vec3::Zero()};
}

}  // namespace

void KinematicChain::validate() const {
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Joint& j = joints[i];
    if (!j.axis.allFinite() || std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw InvariantError("joint " + std::to_string(i) + ": axis is not unit length");
    }
    if (!(j.lower <= j.upper)) {
      throw InvariantError("joint " + std::to_string(i) + ": lower limit exceeds upper");
    }
    if (!j.parent_to_joint.is_proper()) {
      throw InvariantError("joint " + std::to_string(i) + ": transform is not rigid");
    }
  }
  if (!end_effector_offset.is_proper()) {
    throw InvariantError("end-effector offset is not rigid");
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkPrimitive& link = links[i];
    if (link.joint < 0 || static_cast<std::size_t>(link.joint) >= joints.size()) {
      throw InvariantError("link " + std::to_string(i) + " references joint " +
                           std::to_string(link.joint) + " outside the chain");
    }
    if (const auto* cap = std::get_if<Capsule>(&link.shape)) {
      if (!(cap->radius > 0.0)) {
        throw InvariantError("link " + std::to_string(i) + ": capsule radius must be positive");
      }
    } else {
      const auto& box = std::get<Box>(link.shape);
      if (!(box.half_extents.array() > 0.0).all()) {
        throw InvariantError("link " + std::to_string(i) + ": box extents must be positive");
      }
    }
  }
}

FkResult forward_kinematics(const KinematicChain& chain, std::span<const double> q) {
  if (q.size() != chain.dof()) {
    throw InvariantError("forward kinematics: got " + std::to_string(q.size()) +
                         " joint values for a " + std::to_string(chain.dof()) +
                         "-joint chain");
  }
  FkResult out;
  out.joint_frames.reserve(chain.dof());
  RigidTransform current;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const Joint& joint = chain.joints[i];
    if (q[i] < joint.lower || q[i] > joint.upper) {
      std::ostringstream msg;
      msg << "joint " << i << " value " << q[i] << " outside [" << joint.lower
          << ", " << joint.upper << "]";
      out.warnings.push_back(msg.str());
    }
    current = current * joint.parent_to_joint * joint_motion(joint, q[i]);
    out.joint_frames.push_back(current);
  }
  out.end_effector = current * chain.end_effector_offset;
  return out;
}

KinematicChain concatenate(const KinematicChain& a, const KinematicChain& b) {
  KinematicChain out = a;
  out.name = a.name + "+" + b.name;
  const int offset = static_cast<int>(a.joints.size());
  for (std::size_t i = 0; i < b.joints.size(); ++i) {
    Joint j = b.joints[i];
    if (i == 0) j.parent_to_joint = a.end_effector_offset * j.parent_to_joint;
    out.joints.push_back(j);
  }
  if (b.joints.empty()) {
    out.end_effector_offset = a.end_effector_offset * b.end_effector_offset;
  } else {
    out.end_effector_offset = b.end_effector_offset;
  }
  for (LinkPrimitive link : b.links) {
    link.joint += offset;
    out.links.push_back(link);
  }
  return out;
}

}  // namespace augforge
