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

// Demonstration data: frames, episodes, mesh assets, and the dataset manifest.

#ifndef AUGFORGE_EPISODE_HPP_
#define AUGFORGE_EPISODE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "augforge/camera.hpp"
#include "augforge/image.hpp"

namespace augforge {

// One camera's observation within a frame.
struct CameraView {
  std::string camera;
  Image rgb;
  std::optional<DepthMap> depth;

  bool operator==(const CameraView&) const = default;
};

struct NamedCamera {
  std::string name;
  int width = 0;
  int height = 0;
  CameraModel model;
};

struct Frame {
  // Ordered as the episode's camera list.
  std::vector<CameraView> views;
  std::vector<double> joints;
  double gripper = 0.0;
  // Opaque action payload; never interpreted by the engine.
  std::vector<double> action;

  bool operator==(const Frame&) const = default;
};

struct Episode {
  std::string id;
  std::vector<Frame> frames;
  std::string task_text;
  std::string object_label;
  std::string receptacle_label;
  // Annotated on frame 0 of the primary camera.
  std::optional<Mask> object_mask;
  std::optional<Mask> receptacle_mask;
  std::string chain_ref;
  std::vector<NamedCamera> cameras;
  // Name of the camera the structured regime edits.
  std::string primary_camera;

  const NamedCamera& camera(const std::string& name) const;
  std::size_t camera_index(const std::string& name) const;
  std::size_t primary_index() const { return camera_index(primary_camera); }

  bool operator==(const Episode& other) const;
};

enum class RoleTag : std::uint8_t { kObject, kReceptacle, kDistractor };

const char* to_string(RoleTag tag);
std::optional<RoleTag> role_tag_from_string(const std::string& s);

struct MeshAsset {
  // File name relative to the catalog directory; doubles as the asset id.
  std::string name;
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::string category;
  std::string prompt_noun;
  std::vector<RoleTag> role_tags;

  bool has_role(RoleTag tag) const;
  // Axis-aligned bounds of the vertices.
  std::pair<Vec3, Vec3> bounds() const;
  // Throws InvariantError on out-of-range indices, non-finite coordinates,
  // or an empty triangle list.
  void validate() const;
};

struct RoleCounts {
  std::size_t object = 0;
  std::size_t receptacle = 0;
  std::size_t distractor = 0;

  bool operator==(const RoleCounts&) const = default;
};

struct MeshCatalog {
  std::vector<MeshAsset> assets;

  RoleCounts counts() const;
  std::vector<const MeshAsset*> with_role(RoleTag tag) const;
  const MeshAsset* find(const std::string& name) const;
};

}  // namespace augforge

#endif  // AUGFORGE_EPISODE_HPP_
