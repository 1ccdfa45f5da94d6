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

#include "augforge/episode.hpp"

#include <cmath>

#include "augforge/error.hpp"

namespace augforge {
namespace {

bool same_camera(const NamedCamera& a, const NamedCamera& b) {
  return a.name == b.name && a.width == b.width && a.height == b.height &&
         a.model.fx == b.model.fx && a.model.fy == b.model.fy && a.model.cx == b.model.cx &&
         a.model.cy == b.model.cy && a.model.pose.rotation == b.model.pose.rotation &&
         a.model.pose.translation == b.model.pose.translation;
}

}  // namespace

const NamedCamera& Episode::camera(const std::string& name) const {
  return cameras.at(camera_index(name));
}

std::size_t Episode::camera_index(const std::string& name) const {
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    if (cameras[i].name == name) return i;
  }
  throw InvariantError("episode " + id + " has no camera named '" + name + "'");
}

bool Episode::operator==(const Episode& other) const {
  if (cameras.size() != other.cameras.size()) return false;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    if (!same_camera(cameras[i], other.cameras[i])) return false;
  }
  return id == other.id && frames == other.frames && task_text == other.task_text &&
         object_label == other.object_label && receptacle_label == other.receptacle_label &&
         object_mask == other.object_mask && receptacle_mask == other.receptacle_mask &&
         chain_ref == other.chain_ref && primary_camera == other.primary_camera;
}

const char* to_string(RoleTag tag) {
  switch (tag) {
    case RoleTag::kObject:
      return "object";
    case RoleTag::kReceptacle:
      return "receptacle";
    case RoleTag::kDistractor:
      return "distractor";
  }
  return "unknown";
}

std::optional<RoleTag> role_tag_from_string(const std::string& s) {
  if (s == "object") return RoleTag::kObject;
  if (s == "receptacle") return RoleTag::kReceptacle;
  if (s == "distractor") return RoleTag::kDistractor;
  return std::nullopt;
}

bool MeshAsset::has_role(RoleTag tag) const {
  for (RoleTag t : role_tags) {
    if (t == tag) return true;
  }
  return false;
}

std::pair<Vec3, Vec3> MeshAsset::bounds() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

void MeshAsset::validate() const {
  if (triangles.empty()) throw InvariantError("mesh " + name + " has no triangles");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].allFinite()) {
      throw InvariantError("mesh " + name + ": vertex " + std::to_string(i) + " is not finite");
    }
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (std::uint32_t idx : triangles[t]) {
      if (idx >= vertices.size()) {
        throw InvariantError("mesh " + name + ": triangle " + std::to_string(t) +
                             " references vertex " + std::to_string(idx) + " of " +
                             std::to_string(vertices.size()));
      }
    }
  }
}

RoleCounts MeshCatalog::counts() const {
  RoleCounts c;
  for (const MeshAsset& a : assets) {
    if (a.has_role(RoleTag::kObject)) ++c.object;
    if (a.has_role(RoleTag::kReceptacle)) ++c.receptacle;
    if (a.has_role(RoleTag::kDistractor)) ++c.distractor;
  }
  return c;
}

std::vector<const MeshAsset*> MeshCatalog::with_role(RoleTag tag) const {
  std::vector<const MeshAsset*> out;
  for (const MeshAsset& a : assets) {
    if (a.has_role(tag)) out.push_back(&a);
  }
  return out;
}

const MeshAsset* MeshCatalog::find(const std::string& name) const {
  for (const MeshAsset& a : assets) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

}  // namespace augforge
