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

#ifndef AUGFORGE_KINEMATICS_HPP_
#define AUGFORGE_KINEMATICS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "augforge/transform.hpp"

namespace augforge {

enum class JointKind { kRevolute, kPrismatic };

struct Joint {
  // Fixed offset from the previous joint frame (or the world, for joint 0).
  RigidTransform parent_to_joint;
  Vec3 axis = Vec3::UnitZ();
  JointKind kind = JointKind::kRevolute;
  double lower = -1e9;
  double upper = 1e9;
};

// Collision-free approximations of a link's visible shape, expressed in the
// frame of the joint the link hangs off.
struct Capsule {
  double radius = 0.0;
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

struct Box {
  Vec3 half_extents = Vec3::Zero();
  RigidTransform pose;
};

struct LinkPrimitive {
  int joint = 0;
  std::variant<Capsule, Box> shape;
};

struct KinematicChain {
  std::string name;
  std::vector<Joint> joints;
  RigidTransform end_effector_offset;
  std::vector<LinkPrimitive> links;

  std::size_t dof() const { return joints.size(); }
  // Throws InvariantError on non-unit axes, inverted limits, improper
  // transforms, or link records that reference missing joints.
  void validate() const;
};

struct FkResult {
  // World pose of each joint frame after applying its joint value.
  std::vector<RigidTransform> joint_frames;
  RigidTransform end_effector;
  // Joint-limit violations; recorded teleoperation data may brush limits.
  std::vector<std::string> warnings;
};

// Throws InvariantError when q.size() != chain.dof().
FkResult forward_kinematics(const KinematicChain& chain, std::span<const double> q);

// Chain `b` mounted at the end effector of chain `a`.
KinematicChain concatenate(const KinematicChain& a, const KinematicChain& b);

KinematicChain parse_chain_json(const std::string& text);
std::string chain_to_json(const KinematicChain& chain);
KinematicChain load_chain(const std::filesystem::path& path);
void save_chain(const std::filesystem::path& path, const KinematicChain& chain);

}  // namespace augforge

#endif  // AUGFORGE_KINEMATICS_HPP_
